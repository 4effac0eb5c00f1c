#include "doctest.h"

#include <cstdio>
#include <filesystem>

#include "qle/io.hpp"
#include "qle/spectrum.hpp"

using namespace qle;

TEST_CASE("make_grid basics") {
    const FrequencyGrid g = make_grid(0.01, 1000);
    CHECK(g.size() == 2001);
    CHECK(g.omega(0) == doctest::Approx(-10.0));
    CHECK(g.omega(2000) == doctest::Approx(10.0));
    CHECK(g.omega(g.zero_index()) == 0.0);

    const FrequencyGrid g2 = make_grid(1.0, 1);
    CHECK(g2.size() == 3);
    CHECK(g2.omega(0) == -1.0);
    CHECK(g2.omega(1) == 0.0);
    CHECK(g2.omega(2) == 1.0);

    CHECK_THROWS_AS(make_grid(0.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(0.1, 0), std::invalid_argument);
}

TEST_CASE("grid reflection is exact index arithmetic") {
    const FrequencyGrid g = make_grid(0.037, 57);
    for (int i = 0; i < g.size(); ++i) {
        CHECK(g.omega(g.reflect(i)) == -g.omega(i)); // bitwise, not approx
    }
}

TEST_CASE("hermitian_residual") {
    const FrequencyGrid g = make_grid(0.05, 100);

    // f = i w: odd imaginary, hermitian-symmetric
    auto s1 = sample_spectrum(g, [](double w) { return cplx(0.0, w); });
    CHECK(hermitian_residual(s1) == doctest::Approx(0.0).epsilon(1e-15));

    // f = i (constant): residual |i - (-i)| = 2
    auto s2 = sample_spectrum(g, [](double) { return cplx(0.0, 1.0); });
    CHECK(hermitian_residual(s2) == doctest::Approx(2.0));

    // f = w^2: even real
    auto s3 = sample_spectrum(g, [](double w) { return cplx(w * w, 0.0); });
    CHECK(hermitian_residual(s3) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("sample_spectrum with enforcement is exactly hermitian") {
    const FrequencyGrid g = make_grid(0.1, 40);
    auto s = sample_spectrum(g, [](double w) { return cplx(w * w, w * w * w); }, true);
    CHECK(hermitian_residual(s) == 0.0);
    CHECK(s.hermitian);
}

TEST_CASE("csv round trip preserves values to full precision") {
    const FrequencyGrid g = make_grid(0.013, 25);
    auto s = sample_spectrum(g, [](double w) { return cplx(std::sin(w), std::cos(3 * w)); });
    const auto path = std::filesystem::temp_directory_path() / "qle_spec_test.csv";
    write_spectrum_csv(path.string(), s, {"model=test", "units: hbar=kB=c=1"});
    const ComplexSpectrum t = read_spectrum_csv(path.string());
    REQUIRE(t.size() == s.size());
    CHECK(t.grid.delta == doctest::Approx(s.grid.delta).epsilon(1e-15));
    for (int i = 0; i < s.size(); ++i) {
        CHECK(t.values[i].real() == s.values[i].real());
        CHECK(t.values[i].imag() == s.values[i].imag());
    }
    std::filesystem::remove(path);
}

TEST_CASE("json round trip") {
    const FrequencyGrid g = make_grid(0.2, 12);
    auto s = sample_spectrum(g, [](double w) { return cplx(w, -w * w); });
    const ComplexSpectrum t = spectrum_from_json(spectrum_to_json(s));
    for (int i = 0; i < s.size(); ++i) CHECK(t.values[i] == s.values[i]);
}

TEST_CASE("thermal state validation") {
    CHECK(make_thermal_state(0.0).temperature == 0.0);
    CHECK_THROWS_AS(make_thermal_state(-1.0), std::invalid_argument);
}
