#include "doctest.h"

#include "oracles.hpp"
#include "qle/dynamics.hpp"
#include "qle/errors.hpp"
#include "qle/radiation_pressure.hpp"

using namespace qle;

namespace {
constexpr double kPi = 3.14159265358979323846;

ComplexSpectrum flat_spectrum(double level, double band, int half = 500) {
    const FrequencyGrid g = make_grid(band / half, half);
    return sample_spectrum(g, [&](double) { return cplx(level, 0.0); }, true);
}

// stationary <q^2> oracle: int dw/2pi C_sym(w) / |K - m w^2 - chi(w)|^2
double variance_oracle(const MechanicalSystem& sys, const ComplexSpectrum& c_sym,
                       int n_quad = 200001) {
    const double W = c_sym.grid.max_omega();
    const double h = 2.0 * W / (n_quad - 1);
    const double m = equation_mass(sys);
    double sum = 0.0;
    for (int i = 0; i < n_quad; ++i) {
        const double w = -W + i * h;
        const double wt = (i == 0 || i == n_quad - 1) ? 0.5 : 1.0;
        const cplx den = sys.spring_constant - m * w * w - system_susceptibility(sys, w);
        sum += wt * interp_spectrum(c_sym, w).real() / std::norm(den);
    }
    return sum * h / (2.0 * kPi);
}
} // namespace

TEST_CASE("symmetrize_spectrum") {
    const FrequencyGrid g = make_grid(0.1, 40);
    SUBCASE("even part of an asymmetric spectrum") {
        auto cff = sample_spectrum(g, [](double w) { return cplx(w > 0 ? w : 0.1, 0.0); });
        const ComplexSpectrum s = symmetrize_spectrum(cff);
        CHECK(hermitian_residual(s) == 0.0);
        for (int i = 0; i < s.size(); ++i)
            CHECK(s.values[i].real() ==
                  doctest::Approx(0.5 * (cff.values[i].real() +
                                         cff.values[g.reflect(i)].real())));
    }
    SUBCASE("vacuum: C_sym(w) = xi_0(|w|)") {
        const SMatrixModel resonance = ResonanceCutoff{1.0};
        auto cff = sample_spectrum(g, [&](double w) {
            return cplx(force_spectrum(resonance, ThermalState{0.0}, w, 1e-9), 0.0);
        });
        const ComplexSpectrum s = symmetrize_spectrum(cff);
        for (double w : {0.5, 1.5}) {
            const int i = g.zero_index() + static_cast<int>(std::round(w / g.delta));
            CHECK(s.values[i].real() ==
                  doctest::Approx(oracle::xi0_resonance_closed(1.0, w)).epsilon(1e-7));
        }
    }
}

TEST_CASE("noise synthesis") {
    SUBCASE("white spectrum to Nyquist: variance 2D/dt, no lag correlation") {
        const double D = 0.4;
        const double band = 50.0;
        const double dt = kPi / band; // white all the way to Nyquist
        const auto c_sym = flat_spectrum(2.0 * D, band);
        const NoiseRealization noise = synthesize_noise(c_sym, 3000.0 * dt, dt, 11, 0);
        const int n = static_cast<int>(noise.samples.size());
        const double mean = noise.samples.mean();
        const double var = (noise.samples - mean).square().sum() / (n - 1);
        CHECK(var == doctest::Approx(2.0 * D / dt).epsilon(0.08));
        double lag1 = 0.0;
        for (int i = 0; i + 1 < n; ++i)
            lag1 += (noise.samples[i] - mean) * (noise.samples[i + 1] - mean);
        lag1 /= (n - 2);
        // 3 sigma bound for the lag-1 estimator of white noise
        CHECK(std::fabs(lag1) < 3.0 * var / std::sqrt(double(n)));
    }
    SUBCASE("zero spectrum gives the zero series") {
        const auto c_sym = flat_spectrum(0.0, 10.0);
        const NoiseRealization noise = synthesize_noise(c_sym, 50.0, 0.1, 3, 7);
        CHECK(noise.samples.abs().maxCoeff() == 0.0);
    }
    SUBCASE("Nyquist violation is rejected") {
        const auto c_sym = flat_spectrum(1.0, 50.0);
        CHECK_THROWS_AS(synthesize_noise(c_sym, 100.0, 0.1, 1, 0),
                        std::invalid_argument); // Nyquist 31.4 < band 50
    }
    SUBCASE("negative spectrum rejected") {
        const FrequencyGrid g = make_grid(0.1, 20);
        auto bad = sample_spectrum(g, [](double) { return cplx(-1.0, 0.0); });
        CHECK_THROWS_AS(synthesize_noise(bad, 10.0, 0.1, 1, 0), std::invalid_argument);
    }
    SUBCASE("identical (seed, stream) is bit-identical") {
        const auto c_sym = flat_spectrum(1.0, 20.0);
        const auto a = synthesize_noise(c_sym, 100.0, 0.1, 42, 3);
        const auto b = synthesize_noise(c_sym, 100.0, 0.1, 42, 3);
        CHECK((a.samples == b.samples).all());
        const auto c = synthesize_noise(c_sym, 100.0, 0.1, 42, 4);
        CHECK(!(c.samples == a.samples).all());
    }
}

TEST_CASE("periodogram matches the target spectrum") {
    // perfect-reflector thermal spectrum over a modest band
    const SMatrixModel perfect = PerfectReflector{};
    const double T = 1.0;
    const FrequencyGrid g = make_grid(0.05, 400); // [-20, 20]
    auto c_sym = sample_spectrum(
        g,
        [&](double w) {
            const double xi = w * w * w / (6.0 * kPi) + 2.0 * kPi * T * T * w / 3.0;
            return cplx(w == 0.0 ? 4.0 * kPi * T * T * T / 3.0
                                 : xi / std::tanh(0.5 * w / T),
                        0.0);
        },
        true);

    std::vector<NoiseRealization> runs;
    for (int s = 0; s < 100; ++s)
        runs.push_back(synthesize_noise(c_sym, 0.1 * 4096, 0.1, 2024, s));

    SUBCASE("Welch estimate within 5% in-band (rms over bins)") {
        const Periodogram p = welch_periodogram(runs, 512);
        double acc = 0.0, worst = 0.0;
        int checked = 0;
        for (int k = 3; k < static_cast<int>(p.freq.size()) - 1; ++k) {
            const double w = p.freq[k];
            if (w < 1.0 || w > 15.0) continue; // in-band, away from edges
            const double rel = p.power[k] / interp_spectrum(c_sym, w).real() - 1.0;
            acc += rel * rel;
            worst = std::max(worst, std::fabs(rel));
            ++checked;
        }
        CHECK(checked > 50);
        CHECK(std::sqrt(acc / checked) < 0.05);
        CHECK(worst < 0.15);
    }
    SUBCASE("rms error drops ~2x from 25 to 100 realizations") {
        auto rms_err = [&](int count) {
            std::vector<NoiseRealization> sub(runs.begin(), runs.begin() + count);
            const Periodogram p = mean_periodogram(sub);
            double acc = 0.0;
            int m = 0;
            for (int k = 0; k < static_cast<int>(p.freq.size()); ++k) {
                const double w = p.freq[k];
                if (w < 1.0 || w > 15.0) continue;
                const double want = interp_spectrum(c_sym, w).real();
                acc += std::pow(p.power[k] / want - 1.0, 2);
                ++m;
            }
            return std::sqrt(acc / m);
        };
        const double r = rms_err(25) / rms_err(100);
        CHECK(r > 1.4);
        CHECK(r < 2.9);
    }
}

TEST_CASE("frequency-domain motion solver") {
    const MechanicalSystem brown = make_brownian_system(1.0, 0.0, 0.5, 1.0);

    SUBCASE("zero force gives the zero trajectory") {
        NoiseRealization noise;
        noise.dt = 0.1;
        noise.samples = Eigen::ArrayXd::Zero(256);
        const Trajectory tr = solve_motion_frequency(brown, noise);
        CHECK(tr.velocity.abs().maxCoeff() == 0.0);
        CHECK(tr.position.abs().maxCoeff() == 0.0);
    }
    SUBCASE("monochromatic force: velocity = Re[Y(w0) e^{-i w0 t}]") {
        const int n = 1024;
        const double dt = 0.05;
        const int k0 = 37;
        const double w0 = 2.0 * kPi * k0 / (n * dt);
        NoiseRealization noise;
        noise.dt = dt;
        noise.samples.resize(n);
        for (int i = 0; i < n; ++i) noise.samples[i] = std::cos(w0 * i * dt);
        const Trajectory tr = solve_motion_frequency(brown, noise);
        // Y = 1/Z, Z = D/T - i m w
        const cplx Y = 1.0 / (cplx(0.5, -1.0 * w0));
        for (int i = 0; i < n; i += 97) {
            const double want = (Y * std::exp(cplx(0.0, -w0 * i * dt))).real();
            CHECK(tr.velocity[i] == doctest::Approx(want).epsilon(1e-9));
        }
    }
    SUBCASE("linearity to round-off") {
        const auto c_sym = flat_spectrum(1.0, 20.0);
        const auto f1 = synthesize_noise(c_sym, 51.2, 0.1, 5, 0);
        const auto f2 = synthesize_noise(c_sym, 51.2, 0.1, 5, 1);
        NoiseRealization sum = f1;
        sum.samples = 2.0 * f1.samples + 3.0 * f2.samples;
        const Trajectory t1 = solve_motion_frequency(brown, f1);
        const Trajectory t2 = solve_motion_frequency(brown, f2);
        const Trajectory ts = solve_motion_frequency(brown, sum);
        const double scale = ts.velocity.abs().maxCoeff();
        CHECK(((ts.velocity - 2.0 * t1.velocity - 3.0 * t2.velocity).abs().maxCoeff()) <
              1e-12 * scale);
    }
    SUBCASE("runaway systems are refused") {
        const MechanicalSystem al = abraham_lorentz_system(1.0, 1.0, 0.0);
        NoiseRealization noise;
        noise.dt = 0.1;
        noise.samples = Eigen::ArrayXd::Zero(64);
        CHECK_THROWS_AS(solve_motion_frequency(al, noise), stability_error);
    }
    SUBCASE("Ornstein-Uhlenbeck velocity autocorrelation") {
        // Brownian kernel: C_v(tau) = (T/m) exp(-(D/T) tau / m)
        const double D = 0.5, T = 1.0, m = 1.0, gamma = D / T / m;
        const auto c_sym = flat_spectrum(2.0 * D, 60.0, 1200);
        const double dt = 0.05, duration = 0.05 * 16384;
        Eigen::ArrayXd acf = Eigen::ArrayXd::Zero(61);
        int count = 0;
        const MechanicalSystem sys = make_brownian_system(m, 0.0, D, T);
        const TransferFunction tf = build_transfer(sys, 16384, dt);
        for (int s = 0; s < 8; ++s) {
            const auto noise = synthesize_noise(c_sym, duration, dt, 99, s);
            const Trajectory tr = solve_motion_frequency(tf, noise);
            const int n = static_cast<int>(tr.velocity.size());
            for (int lag = 0; lag <= 60; ++lag) {
                double acc = 0.0;
                for (int i = 0; i + lag < n; ++i) acc += tr.velocity[i] * tr.velocity[i + lag];
                acf[lag] += acc / (n - lag);
            }
            ++count;
        }
        acf /= count;
        CHECK(acf[0] == doctest::Approx(T / m).epsilon(0.05));
        for (int lag : {10, 25, 50}) {
            const double want = (T / m) * std::exp(-gamma * lag * dt);
            CHECK(acf[lag] == doctest::Approx(want).epsilon(0.08));
        }
    }
}

TEST_CASE("ensemble reproducibility across thread counts") {
    const MechanicalSystem sys = make_brownian_system(1.0, 0.0, 0.5, 1.0);
    const auto c_sym = flat_spectrum(1.0, 30.0);
    const auto e1 = run_ensemble(sys, c_sym, 12, 51.2, 0.1, 7, 1);
    const auto e2 = run_ensemble(sys, c_sym, 12, 51.2, 0.1, 7, 4);
    REQUIRE(e1.trajectories.size() == e2.trajectories.size());
    for (size_t s = 0; s < e1.trajectories.size(); ++s) {
        CHECK((e1.trajectories[s].velocity == e2.trajectories[s].velocity).all());
        CHECK((e1.trajectories[s].position == e2.trajectories[s].position).all());
    }
}

TEST_CASE("diffusion estimator recovers injected white noise") {
    // large mass: momentum variance grows as 2 D0 t over the window
    const double D0 = 0.3;
    const MechanicalSystem sys = make_brownian_system(1000.0, 0.0, D0, 1.0);
    const auto c_sym = flat_spectrum(2.0 * D0, 40.0, 800);
    const auto ens = run_ensemble(sys, c_sym, 60, 25.6, 0.05, 31, 2);
    const Estimate est = estimate_diffusion(ens, 2.0, 20.0);
    CHECK(std::fabs(est.value - D0) < 3.0 * est.std_error + 0.02 * D0);
    CHECK_THROWS_AS(estimate_diffusion(
                        run_ensemble(make_brownian_system(1.0, 0.5, 0.3, 1.0),
                                     c_sym, 8, 25.6, 0.05, 1, 1),
                        2.0, 20.0),
                    std::invalid_argument);
}

TEST_CASE("equilibrium variance matches the spectral oracle") {
    // classical limit: T >> band scales, <q^2> -> T/K
    const double D = 2.0, T = 8.0, m = 1.0, K = 2.0;
    const MechanicalSystem sys = make_brownian_system(m, K, D, T);
    const auto c_sym = flat_spectrum(2.0 * D, 60.0, 1200);
    const auto ens = run_ensemble(sys, c_sym, 40, 0.05 * 8192, 0.05, 123, 2);
    const double relax = 10.0 * m / (D / T);
    const Estimate est = estimate_equilibrium_variance(ens, relax);
    const double oracle_val = variance_oracle(sys, c_sym);
    CHECK(std::fabs(est.value - oracle_val) < 3.0 * est.std_error + 0.01 * oracle_val);
    CHECK(oracle_val == doctest::Approx(T / K).epsilon(0.02));

    SUBCASE("doubling K halves the classical variance") {
        const MechanicalSystem sys2 = make_brownian_system(m, 2.0 * K, D, T);
        CHECK(variance_oracle(sys2, c_sym) ==
              doctest::Approx(0.5 * variance_oracle(sys, c_sym)).epsilon(0.02));
    }
}
