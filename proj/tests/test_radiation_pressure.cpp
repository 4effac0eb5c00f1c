#include "doctest.h"

#include "oracles.hpp"
#include "qle/radiation_pressure.hpp"

using namespace qle;

namespace {
const SMatrixModel resonance = ResonanceCutoff{1.0};
const SMatrixModel perfect = PerfectReflector{};
constexpr double kPi = 3.14159265358979323846;
} // namespace

TEST_CASE("alpha, beta, gamma") {
    SUBCASE("perfect reflector: alpha = 2, beta = 0, gamma = 4") {
        const ScatterKernels k = alpha_beta_gamma(perfect, 0.7, -2.1);
        CHECK(k.alpha == cplx(2.0, 0.0));
        CHECK(k.beta == cplx(0.0, 0.0));
        CHECK(k.gamma == 4.0);
    }
    SUBCASE("resonance cutoff at (w, -w)") {
        const double w = 1.4, W = 1.0;
        const ScatterKernels k = alpha_beta_gamma(resonance, w, -w);
        const double denom = w * w + W * W;
        CHECK(k.alpha.real() == doctest::Approx(2.0 * W * W / denom).epsilon(1e-13));
        CHECK(std::abs(k.alpha.imag()) < 1e-14);
        CHECK(k.beta.real() == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(k.beta.imag() == doctest::Approx(2.0 * W * w / denom).epsilon(1e-13));
        CHECK(k.gamma == doctest::Approx(4.0 * W * W / denom).epsilon(1e-13));
    }
    SUBCASE("unitarity identity gamma = 2 Re alpha") {
        for (double a : {-2.0, 0.3, 1.1})
            for (double b : {-0.7, 0.0, 2.5}) {
                const ScatterKernels k = alpha_beta_gamma(resonance, a, b);
                CHECK(std::fabs(k.gamma - 2.0 * k.alpha.real()) <= 1e-12);
            }
    }
    SUBCASE("gamma symmetry and positivity") {
        for (double a : {-1.5, 0.2, 3.0})
            for (double b : {-2.2, 0.9}) {
                const double g1 = alpha_beta_gamma(resonance, a, b).gamma;
                CHECK(g1 >= 0.0);
                CHECK(alpha_beta_gamma(resonance, b, a).gamma == doctest::Approx(g1).epsilon(1e-14));
                CHECK(alpha_beta_gamma(resonance, -a, -b).gamma == doctest::Approx(g1).epsilon(1e-14));
            }
    }
}

TEST_CASE("thermal sigma") {
    CHECK(thermal_sigma(0.0, 2.0) == doctest::Approx(0.5));
    CHECK(thermal_sigma(0.0, -2.0) == doctest::Approx(0.5));
    // T=1, w=2: 0.5 coth(1)
    CHECK(thermal_sigma(1.0, 2.0) == doctest::Approx(0.6565176427496657).epsilon(1e-12));
    // removable point at w = 0: T/2
    CHECK(thermal_sigma(1.0, 0.0) == doctest::Approx(0.5));
    CHECK(thermal_sigma(1.0, 1e-12) == doctest::Approx(0.5).epsilon(1e-9));
    // even, and >= |w|/4
    for (double w : {0.3, 1.0, 5.0}) {
        CHECK(thermal_sigma(0.7, w) == doctest::Approx(thermal_sigma(0.7, -w)).epsilon(1e-14));
        CHECK(thermal_sigma(0.7, w) >= 0.25 * w);
    }
    // detailed balance of c: c(w)/c(-w) = e^{w/T}
    for (double w : {0.2, 1.1}) {
        const double ratio = thermal_c(0.5, w) / thermal_c(0.5, -w);
        CHECK(ratio == doctest::Approx(std::exp(w / 0.5)).epsilon(1e-12));
    }
}

TEST_CASE("vacuum susceptibility") {
    SUBCASE("perfect reflector: chi_0 = i w^3 / 6 pi") {
        for (double w : {0.3, 1.0, -2.0}) {
            const cplx v = vacuum_susceptibility(perfect, w);
            CHECK(std::abs(v.real()) < 1e-14);
            CHECK(v.imag() == doctest::Approx(w * w * w / (6.0 * kPi)).epsilon(1e-10));
        }
    }
    SUBCASE("static value vanishes") {
        CHECK(std::abs(vacuum_susceptibility(resonance, 0.0)) == 0.0);
    }
    SUBCASE("resonance cutoff at w = 0.5 against the brute-force reference") {
        const cplx v = vacuum_susceptibility(resonance, 0.5);
        // frozen from a 2e6-panel midpoint Riemann evaluation
        CHECK(v.real() == doctest::Approx(-0.00151132615849384).epsilon(1e-9));
        CHECK(v.imag() == doctest::Approx(0.00618587416390692).epsilon(1e-9));
        const cplx ref = oracle::chi0_riemann(resonance, 0.5);
        CHECK(std::abs(v - ref) < 1e-10);
    }
    SUBCASE("Im chi_0 equals the closed-form vacuum commutator") {
        for (double w : {0.4, 1.3, 3.0})
            CHECK(vacuum_susceptibility(resonance, w).imag() ==
                  doctest::Approx(oracle::xi0_resonance_closed(1.0, w)).epsilon(1e-10));
    }
    SUBCASE("hermitian symmetry of direct evaluation") {
        for (double w : {0.5, 2.0}) {
            const cplx a = vacuum_susceptibility(resonance, w);
            const cplx b = vacuum_susceptibility(resonance, -w);
            CHECK(std::abs(b - std::conj(a)) < 1e-12);
        }
    }
}

TEST_CASE("thermal susceptibility") {
    SUBCASE("T = 0 reduces to chi_0") {
        const cplx a = thermal_susceptibility(resonance, ThermalState{0.0}, 0.8);
        const cplx b = vacuum_susceptibility(resonance, 0.8);
        CHECK(std::abs(a - b) == 0.0);
    }
    SUBCASE("perfect reflector: chi_T = i (w^3/6pi + 2 pi T^2 w / 3)") {
        const double T = 0.7;
        for (double w : {0.2, 1.5}) {
            const cplx v = thermal_susceptibility(perfect, ThermalState{T}, w);
            const double want = w * w * w / (6.0 * kPi) + 2.0 * kPi * T * T * w / 3.0;
            CHECK(std::abs(v.real()) < 1e-11);
            CHECK(v.imag() == doctest::Approx(want).epsilon(1e-9));
        }
    }
    SUBCASE("resonance cutoff, T = 0.2, w = 0.5 against the brute-force reference") {
        const cplx v = thermal_susceptibility(resonance, ThermalState{0.2}, 0.5);
        // frozen from a 2e6-panel midpoint Riemann evaluation
        CHECK(v.real() == doctest::Approx(-0.00695536384226120).epsilon(1e-8));
        CHECK(v.imag() == doctest::Approx(0.03853242552756579).epsilon(1e-8));
        const cplx ref = oracle::chiT_riemann(resonance, 0.2, 0.5);
        CHECK(std::abs(v - ref) < 1e-9);
    }
}

TEST_CASE("force commutator") {
    SUBCASE("odd, zero at zero") {
        CHECK(force_commutator(resonance, ThermalState{0.3}, 0.0) == 0.0);
        for (double w : {0.4, 1.2}) {
            const double a = force_commutator(resonance, ThermalState{0.3}, w);
            const double b = force_commutator(resonance, ThermalState{0.3}, -w);
            CHECK(b == doctest::Approx(-a).epsilon(1e-12));
        }
    }
    SUBCASE("perfect reflector closed form") {
        const double T = 0.5;
        for (double w : {0.3, 2.0}) {
            const double want = w * w * w / (6.0 * kPi) + 2.0 * kPi * T * T * w / 3.0;
            CHECK(force_commutator(perfect, ThermalState{T}, w) ==
                  doctest::Approx(want).epsilon(1e-10));
        }
    }
    SUBCASE("T = 0 matches the vacuum-formula quadrature to 1e-8") {
        for (double w : {0.5, 1.5, 4.0}) {
            const double a = force_commutator(resonance, ThermalState{0.0}, w);
            const double b = vacuum_susceptibility(resonance, w).imag();
            CHECK(a == doctest::Approx(b).epsilon(1e-8));
            CHECK(a == doctest::Approx(oracle::xi0_resonance_closed(1.0, w)).epsilon(1e-10));
        }
    }
    SUBCASE("FDT: Im chi_T = xi_T, two independent quadratures") {
        const ThermalState T{0.2};
        for (double w : {0.1, 0.7, 2.0}) {
            const double xi = force_commutator(resonance, T, w);
            const double im = thermal_susceptibility(resonance, T, w).imag();
            CHECK(std::fabs(im - xi) <= 1e-8 * std::max(1.0, std::fabs(xi)));
        }
    }
    SUBCASE("band-truncated convolution oracle agrees") {
        // direct (unfolded) Riemann over w' in [w - L, L]
        const double T = 0.2, w = 0.8, L = 120.0;
        const double ref = oracle::xiT_band_riemann(resonance, T, w, L, 800000);
        CHECK(force_commutator(resonance, ThermalState{T}, w) ==
              doctest::Approx(ref).epsilon(1e-6));
    }
}

TEST_CASE("force spectrum") {
    SUBCASE("T = 0: C_FF = 2 theta(w) xi_0") {
        CHECK(force_spectrum(resonance, ThermalState{0.0}, -0.5) == 0.0);
        CHECK(force_spectrum(resonance, ThermalState{0.0}, 1.2) ==
              doctest::Approx(2.0 * oracle::xi0_resonance_closed(1.0, 1.2)).epsilon(1e-9));
    }
    SUBCASE("detailed balance: (1 - e^{-w/T}) C_FF = 2 xi_T") {
        const ThermalState T{0.2};
        for (double w : {0.5, 1.5, -0.7}) {
            const double lhs = -std::expm1(-w / T.temperature) *
                               force_spectrum(resonance, T, w);
            const double rhs = 2.0 * force_commutator(resonance, T, w);
            CHECK(std::fabs(lhs - rhs) <= 1e-6 * std::fabs(rhs));
        }
    }
    SUBCASE("classical band of the perfect reflector: C_FF -> 2D") {
        const double T = 1.0;
        const double D = 2.0 * kPi * T * T * T / 3.0;
        const double v = force_spectrum(perfect, ThermalState{T}, 1e-4);
        CHECK(v == doctest::Approx(2.0 * D).epsilon(1e-3));
    }
    SUBCASE("nonnegative") {
        for (double w : {-2.0, -0.3, 0.4, 3.0})
            CHECK(force_spectrum(resonance, ThermalState{0.4}, w) >= 0.0);
    }
}

TEST_CASE("quasistatic coefficients") {
    SUBCASE("vacuum responses vanish for any model") {
        const Quasistatic q = quasistatic_coefficients(resonance, ThermalState{0.0});
        CHECK(q.friction == 0.0);
        CHECK(q.half_curvature == 0.0);
    }
    SUBCASE("perfect reflector: (2 pi T^2/3, 0)") {
        const double T = 0.4;
        const Quasistatic q = quasistatic_coefficients(perfect, ThermalState{T});
        CHECK(q.friction == doctest::Approx(2.0 * kPi * T * T / 3.0).epsilon(1e-10));
        CHECK(std::fabs(q.half_curvature) < 1e-12);
    }
    SUBCASE("resonance cutoff, T = 0.2: two-method agreement to 1e-5") {
        const ThermalState T{0.2};
        const Quasistatic q = quasistatic_coefficients(resonance, T);
        // frozen reference values (independent integrand derivation, verified
        // against 4th-order finite differences of chi_T)
        CHECK(q.friction == doctest::Approx(0.0689301632912).epsilon(1e-9));
        CHECK(q.half_curvature == doctest::Approx(-0.0250222190081).epsilon(1e-8));
        auto chi = [&](double w) { return thermal_susceptibility(resonance, T, w, 1e-11); };
        const cplx d1 = oracle::fd_first(chi, 0.02);
        const cplx d2 = 0.5 * oracle::fd_second(chi, 0.02);
        CHECK(std::fabs(d1.imag() - q.friction) < 1e-5);
        CHECK(std::fabs(d2.real() - q.half_curvature) < 1e-5);
        CHECK(std::fabs(d1.real()) < 1e-8); // Re chi is even
    }
}

TEST_CASE("small-T correction") {
    SUBCASE("T = 0 gives zero") {
        CHECK(std::abs(small_T_correction(resonance, ThermalState{0.0}, 1.0)) == 0.0);
    }
    SUBCASE("perfect reflector: matches the closed-form thermal term") {
        const double T = 0.1, w = 0.7;
        const cplx corr = small_T_correction(perfect, ThermalState{T}, w);
        CHECK(corr.real() == doctest::Approx(0.0));
        CHECK(corr.imag() == doctest::Approx(2.0 * kPi * T * T * w / 3.0).epsilon(1e-13));
    }
    SUBCASE("error shrinks faster than T^2 as T halves") {
        const double w = 0.3;
        auto err = [&](double T) {
            const cplx full = thermal_susceptibility(resonance, ThermalState{T}, w, 1e-12);
            const cplx chi0 = vacuum_susceptibility(resonance, w, 1e-12);
            return std::abs(full - chi0 - small_T_correction(resonance, ThermalState{T}, w));
        };
        const double e1 = err(0.05);
        const double e2 = err(0.025);
        CHECK(e2 < e1 / 4.0); // strictly better than the T^2 scaling of the term itself
    }
}

TEST_CASE("momentum diffusion") {
    SUBCASE("perfect reflector, T = 1: D = 2 pi / 3") {
        CHECK(momentum_diffusion(perfect, ThermalState{1.0}) ==
              doctest::Approx(2.0 * kPi / 3.0).epsilon(1e-10));
    }
    SUBCASE("vacuum: D = 0") {
        CHECK(momentum_diffusion(resonance, ThermalState{0.0}) == 0.0);
    }
    SUBCASE("friction vanishes like T^2 near vacuum") {
        const double f1 = quasistatic_coefficients(resonance, ThermalState{0.02}).friction;
        const double f2 = quasistatic_coefficients(resonance, ThermalState{0.01}).friction;
        CHECK(f1 / f2 == doctest::Approx(4.0).epsilon(0.02));
    }
}

TEST_CASE("passivity precursors of the spectral decomposition") {
    const ThermalState T{0.3};
    const Quasistatic q = quasistatic_coefficients(resonance, T);
    CHECK(q.friction >= 0.0);
    for (double k : {0.2, 0.8, 2.0, 6.0, 20.0})
        CHECK(force_commutator(resonance, T, k) / k >= 0.0);
}
