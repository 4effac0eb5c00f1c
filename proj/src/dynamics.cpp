#include "qle/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

#include "qle/errors.hpp"
#include "qle/radiation_pressure.hpp"

namespace qle {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Deterministic Gaussian stream: mt19937_64 seeded from (master, stream),
// uniforms from the raw 53-bit mantissa, Box-Muller pairs.
class GaussianStream {
public:
    GaussianStream(std::uint64_t master, std::uint64_t stream) {
        std::seed_seq seq{static_cast<std::uint32_t>(master & 0xffffffffu),
                          static_cast<std::uint32_t>(master >> 32),
                          static_cast<std::uint32_t>(stream & 0xffffffffu),
                          static_cast<std::uint32_t>(stream >> 32)};
        eng_.seed(seq);
    }
    double uniform() { return (eng_() >> 11) * (1.0 / 9007199254740992.0); }
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * kPi * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * kPi * u2);
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_{false};
    double spare_{0.0};
};

double kahan_sum(const Eigen::ArrayXd& v) {
    double s = 0.0, c = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double y = v[i] - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

} // namespace

ComplexSpectrum symmetrize_spectrum(const ComplexSpectrum& c_ff) {
    ComplexSpectrum s;
    s.grid = c_ff.grid;
    s.values.resize(c_ff.size());
    for (int i = 0; i < c_ff.size(); ++i) {
        const double v = 0.5 * (c_ff.values[i].real() +
                                c_ff.values[c_ff.grid.reflect(i)].real());
        s.values[i] = cplx(v, 0.0);
    }
    s.hermitian = true;
    return s;
}

NoiseRealization synthesize_noise(const ComplexSpectrum& c_sym, double duration,
                                  double dt, std::uint64_t master_seed,
                                  std::uint64_t stream) {
    if (!(dt > 0.0) || !(duration > dt))
        throw std::invalid_argument("synthesize_noise: need duration > dt > 0");
    const double smax = c_sym.values.abs().maxCoeff();
    for (int i = 0; i < c_sym.size(); ++i) {
        if (c_sym.values[i].real() < -1e-9 * smax)
            throw std::invalid_argument("synthesize_noise: spectrum must be nonnegative");
    }
    // Nyquist must cover the band where the spectrum is non-negligible
    double band_edge = 0.0;
    for (int i = 0; i < c_sym.size(); ++i)
        if (std::abs(c_sym.values[i]) > 1e-12 * smax)
            band_edge = std::max(band_edge, std::fabs(c_sym.grid.omega(i)));
    const double nyquist = kPi / dt;
    if (nyquist < band_edge * (1.0 - 1e-12))
        throw std::invalid_argument("synthesize_noise: Nyquist frequency below the spectrum band");

    const int n = static_cast<int>(std::lround(duration / dt));
    if (n < 4) throw std::invalid_argument("synthesize_noise: too few samples");

    GaussianStream rng(master_seed, stream);
    std::vector<cplx> bins(n, cplx(0.0, 0.0));
    const double dw = 2.0 * kPi / (n * dt);
    auto spectrum_at = [&](int k) {
        const double w = (k <= n / 2) ? k * dw : (k - n) * dw;
        const double v = interp_spectrum(c_sym, w).real();
        return std::max(v, 0.0);
    };
    // DC bin: real Gaussian
    bins[0] = std::sqrt(spectrum_at(0) * n / dt) * rng.gaussian();
    for (int k = 1; k < (n + 1) / 2; ++k) {
        const double amp = std::sqrt(0.5 * spectrum_at(k) * n / dt);
        const cplx z(amp * rng.gaussian(), amp * rng.gaussian());
        bins[k] = z;
        bins[n - k] = std::conj(z);
    }
    if (n % 2 == 0)
        bins[n / 2] = std::sqrt(spectrum_at(n / 2) * n / dt) * rng.gaussian();

    Eigen::FFT<double> fft;
    std::vector<cplx> time(n);
    fft.inv(time, bins); // includes the 1/n factor

    NoiseRealization out;
    out.dt = dt;
    out.master_seed = master_seed;
    out.stream = stream;
    out.samples.resize(n);
    for (int i = 0; i < n; ++i) out.samples[i] = time[i].real();
    return out;
}

TransferFunction build_transfer(const MechanicalSystem& sys, int n, double dt,
                                const ClassificationReport* precomputed) {
    ClassificationReport local;
    if (precomputed == nullptr) {
        const ImpedanceModel imp = impedance_model_from(sys);
        local = classify_motion(imp);
        precomputed = &local;
    }
    if (precomputed->cls != MotionClass::stable_causal)
        throw stability_error(std::string("refusing to simulate a kernel classified ") +
                              to_string(precomputed->cls));

    TransferFunction tf;
    tf.n = n;
    tf.dt = dt;
    tf.mass = equation_mass(sys);
    tf.spring = sys.spring_constant;
    tf.chi_bins.resize(n);
    const double dw = 2.0 * kPi / (n * dt);
    // chi(-w) = conj(chi(w)): evaluate k <= n/2 and reflect
    for (int k = 0; k <= n / 2; ++k) {
        const cplx v = system_susceptibility(sys, k * dw);
        tf.chi_bins[k] = v;
        if (k > 0 && k < n - k) tf.chi_bins[n - k] = std::conj(v);
    }
    // DC impedance (friction) from the first bin slope of Im chi
    tf.dc_impedance = (n > 1) ? tf.chi_bins[1].imag() / dw : 0.0;
    return tf;
}

Trajectory solve_motion_frequency(const TransferFunction& tf, const NoiseRealization& noise) {
    const int n = static_cast<int>(noise.samples.size());
    if (n != tf.n || noise.dt != tf.dt)
        throw std::invalid_argument("solve_motion_frequency: noise/transfer shape mismatch");

    Eigen::FFT<double> fft;
    std::vector<cplx> F(n), fin(n);
    for (int i = 0; i < n; ++i) fin[i] = cplx(noise.samples[i], 0.0);
    fft.fwd(F, fin);

    // Bin k of the inverse DFT carries the mode e^{+i w_k t}, i.e. physical
    // frequency -w_k in the e^{-iwt} convention: apply the conjugate transfer.
    const double dw = 2.0 * kPi / (n * tf.dt);
    std::vector<cplx> vb(n), qb(n);
    const bool bound = tf.spring > 0.0;
    for (int k = 0; k < n; ++k) {
        const double w = (k <= n / 2) ? k * dw : (k - n) * dw;
        if (k == 0) {
            if (bound) {
                qb[0] = F[0] / tf.spring;
                vb[0] = 0.0;
            } else {
                qb[0] = 0.0;
                vb[0] = (std::fabs(tf.dc_impedance) > 1e-148)
                            ? F[0] / tf.dc_impedance
                            : cplx(0.0, 0.0);
            }
            continue;
        }
        const cplx denom = std::conj(tf.spring - tf.mass * w * w - tf.chi_bins[k]);
        if (std::abs(denom) < 1e-148) {
            qb[k] = 0.0;
            vb[k] = 0.0;
            continue;
        }
        qb[k] = F[k] / denom;
        vb[k] = cplx(0.0, w) * qb[k];
    }

    Trajectory tr;
    tr.dt = tf.dt;
    tr.velocity.resize(n);
    tr.position.resize(n);
    std::vector<cplx> tmp(n);
    fft.inv(tmp, vb);
    for (int i = 0; i < n; ++i) tr.velocity[i] = tmp[i].real();
    if (bound) {
        fft.inv(tmp, qb);
        for (int i = 0; i < n; ++i) tr.position[i] = tmp[i].real();
    } else {
        // free particle: cumulative trapezoid of the velocity, q(0) = 0
        double q = 0.0;
        tr.position[0] = 0.0;
        for (int i = 1; i < n; ++i) {
            q += 0.5 * (tr.velocity[i - 1] + tr.velocity[i]) * tf.dt;
            tr.position[i] = q;
        }
    }
    return tr;
}

Trajectory solve_motion_frequency(const MechanicalSystem& sys, const NoiseRealization& noise) {
    const TransferFunction tf =
        build_transfer(sys, static_cast<int>(noise.samples.size()), noise.dt);
    return solve_motion_frequency(tf, noise);
}

TrajectoryEnsemble run_ensemble(const MechanicalSystem& sys, const ComplexSpectrum& c_sym,
                                int n_traj, double duration, double dt,
                                std::uint64_t master_seed, int n_threads) {
    if (n_traj < 1) throw std::invalid_argument("run_ensemble: n_traj >= 1");
    const int n = static_cast<int>(std::lround(duration / dt));
    const TransferFunction tf = build_transfer(sys, n, dt);

    TrajectoryEnsemble ens;
    ens.dt = dt;
    ens.mass = tf.mass;
    ens.spring = tf.spring;
    ens.master_seed = master_seed;
    ens.trajectories.resize(n_traj);

    auto work = [&](int lo, int hi) {
        for (int s = lo; s < hi; ++s) {
            const NoiseRealization noise =
                synthesize_noise(c_sym, duration, dt, master_seed, static_cast<std::uint64_t>(s));
            ens.trajectories[s] = solve_motion_frequency(tf, noise);
        }
    };
    n_threads = std::max(1, n_threads);
    if (n_threads == 1) {
        work(0, n_traj);
    } else {
        std::vector<std::future<void>> futures;
        const int chunk = (n_traj + n_threads - 1) / n_threads;
        for (int t = 0; t < n_threads; ++t) {
            const int lo = t * chunk;
            const int hi = std::min(n_traj, lo + chunk);
            if (lo >= hi) break;
            futures.push_back(std::async(std::launch::async, work, lo, hi));
        }
        for (auto& f : futures) f.get();
    }
    return ens;
}

Estimate estimate_diffusion(const TrajectoryEnsemble& ens, double t0, double t1) {
    if (ens.spring != 0.0)
        throw std::invalid_argument("estimate_diffusion: free particle required (K = 0)");
    const int nt = static_cast<int>(ens.trajectories.size());
    if (nt < 4) throw std::invalid_argument("estimate_diffusion: ensemble too small");
    const int ns = static_cast<int>(ens.trajectories[0].velocity.size());
    const int i0 = std::max(0, static_cast<int>(t0 / ens.dt));
    const int i1 = std::min(ns - 1, static_cast<int>(t1 / ens.dt));
    if (i1 - i0 < 4) throw std::invalid_argument("estimate_diffusion: window too small");

    // block the ensemble for an honest slope error
    const int n_blocks = std::min(10, nt / 2);
    std::vector<double> slopes;
    auto slope_of = [&](int lo, int hi) {
        // OLS slope of Var[p](t) over the window
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int m = 0;
        for (int i = i0; i <= i1; ++i) {
            Eigen::ArrayXd p(hi - lo);
            for (int s = lo; s < hi; ++s)
                p[s - lo] = ens.mass * ens.trajectories[s].velocity[i];
            const double mean = kahan_sum(p) / p.size();
            const double var = kahan_sum((p - mean).square()) / (p.size() - 1);
            const double t = i * ens.dt;
            sx += t; sy += var; sxx += t * t; sxy += t * var;
            ++m;
        }
        return (m * sxy - sx * sy) / (m * sxx - sx * sx);
    };
    const int per = nt / n_blocks;
    for (int b = 0; b < n_blocks; ++b)
        slopes.push_back(0.5 * slope_of(b * per, (b + 1) * per));
    double mean = 0.0;
    for (double s : slopes) mean += s;
    mean /= slopes.size();
    double var = 0.0;
    for (double s : slopes) var += (s - mean) * (s - mean);
    var /= (slopes.size() - 1);
    // point estimate from the full ensemble, error from the block spread
    return {0.5 * slope_of(0, nt), std::sqrt(var / slopes.size())};
}

Estimate estimate_equilibrium_variance(const TrajectoryEnsemble& ens, double discard_time) {
    if (!(ens.spring > 0.0))
        throw std::invalid_argument("estimate_equilibrium_variance: bound particle required");
    const int nt = static_cast<int>(ens.trajectories.size());
    const int ns = static_cast<int>(ens.trajectories[0].position.size());
    const int i0 = std::min(ns - 2, static_cast<int>(discard_time / ens.dt));
    std::vector<double> per_traj(nt);
    for (int s = 0; s < nt; ++s) {
        const auto seg = ens.trajectories[s].position.segment(i0, ns - i0);
        per_traj[s] = kahan_sum(seg.square()) / seg.size();
    }
    double mean = 0.0;
    for (double v : per_traj) mean += v;
    mean /= nt;
    double var = 0.0;
    for (double v : per_traj) var += (v - mean) * (v - mean);
    var /= (nt - 1);
    return {mean, std::sqrt(var / nt)};
}

Periodogram mean_periodogram(const std::vector<NoiseRealization>& noises) {
    if (noises.empty()) throw std::invalid_argument("mean_periodogram: no realizations");
    const int n = static_cast<int>(noises[0].samples.size());
    const double dt = noises[0].dt;
    const double dw = 2.0 * kPi / (n * dt);
    Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(n / 2 + 1);
    Eigen::FFT<double> fft;
    std::vector<cplx> F(n), in(n);
    for (const auto& noise : noises) {
        for (int i = 0; i < n; ++i) in[i] = cplx(noise.samples[i], 0.0);
        fft.fwd(F, in);
        for (int k = 0; k <= n / 2; ++k) acc[k] += std::norm(F[k]) * dt / n;
    }
    acc /= static_cast<double>(noises.size());
    Periodogram p;
    p.freq.resize(n / 2 + 1);
    for (int k = 0; k <= n / 2; ++k) p.freq[k] = k * dw;
    p.power = acc;
    return p;
}

Periodogram welch_periodogram(const std::vector<NoiseRealization>& noises, int segment) {
    if (noises.empty()) throw std::invalid_argument("welch_periodogram: no realizations");
    const int n = static_cast<int>(noises[0].samples.size());
    if (segment < 8 || segment > n)
        throw std::invalid_argument("welch_periodogram: bad segment length");
    const double dt = noises[0].dt;
    const double dw = 2.0 * kPi / (segment * dt);
    Eigen::ArrayXd window(segment);
    for (int i = 0; i < segment; ++i)
        window[i] = 0.5 * (1.0 - std::cos(2.0 * kPi * i / (segment - 1)));
    const double wnorm = window.square().sum();

    Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(segment / 2 + 1);
    int count = 0;
    Eigen::FFT<double> fft;
    std::vector<cplx> F(segment), in(segment);
    for (const auto& noise : noises) {
        for (int start = 0; start + segment <= n; start += segment / 2) {
            for (int i = 0; i < segment; ++i)
                in[i] = cplx(noise.samples[start + i] * window[i], 0.0);
            fft.fwd(F, in);
            for (int k = 0; k <= segment / 2; ++k)
                acc[k] += std::norm(F[k]) * dt / wnorm;
            ++count;
        }
    }
    acc /= static_cast<double>(count);
    Periodogram p;
    p.freq.resize(segment / 2 + 1);
    for (int k = 0; k <= segment / 2; ++k) p.freq[k] = k * dw;
    p.power = acc;
    return p;
}

} // namespace qle
