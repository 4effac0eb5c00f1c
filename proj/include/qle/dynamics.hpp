// dynamics.hpp — Time-domain Langevin simulation: stationary Gaussian force
// noise synthesized from the symmetrized spectrum, motion solved through the
// admittance in the frequency domain, and ensemble estimators for diffusion
// and equilibrium statistics.
//
// The simulated noise is a classical Gaussian process with the symmetrized
// quantum spectrum; the antisymmetric (commutator) part enters only through
// the response kernel chi. Every trajectory derives its own RNG stream
// deterministically from (master_seed, stream index); results are
// bit-identical across reruns and thread counts.

#pragma once

#include <cstdint>
#include <vector>

#include "qle/spectrum.hpp"
#include "qle/stability.hpp"
#include "qle/system.hpp"

namespace qle {

/// C_sym(w) = (C_FF(w) + C_FF(-w))/2; real, even.
ComplexSpectrum symmetrize_spectrum(const ComplexSpectrum& c_ff);

struct NoiseRealization {
    double dt{1.0};
    Eigen::ArrayXd samples;
    std::uint64_t master_seed{0};
    std::uint64_t stream{0};
};

/// Stationary Gaussian series with target two-sided spectrum C_sym under
/// C(tau) = int dw/2pi C_sym(w) e^{-iw tau}: independent Gaussian amplitudes
/// per frequency bin, variance C_sym(w_k) * n/dt, hermitian-paired phases.
/// White spectrum C_sym = 2D gives sample variance 2D/dt.
/// Throws std::invalid_argument when the Nyquist frequency pi/dt lies below
/// the band where C_sym is non-negligible.
NoiseRealization synthesize_noise(const ComplexSpectrum& c_sym, double duration,
                                  double dt, std::uint64_t master_seed,
                                  std::uint64_t stream);

struct Trajectory {
    double dt{1.0};
    Eigen::ArrayXd position;
    Eigen::ArrayXd velocity;
};

/// Frequency response prepared once per (system, n, dt): chi on the FFT bins
/// plus the masses. Construction classifies the system and refuses anything
/// not stable_causal (stability_error).
struct TransferFunction {
    int n{0};
    double dt{1.0};
    double mass{1.0};
    double spring{0.0};
    double dc_impedance{0.0}; // lim_{w->0} Z(w) = friction, for the free case
    Eigen::ArrayXcd chi_bins; // chi at w_k = 2 pi k/(n dt), k = 0..n-1 (wrapped)
};

TransferFunction build_transfer(const MechanicalSystem& sys, int n, double dt,
                                const ClassificationReport* precomputed = nullptr);

/// v[w] = Y[w] F[w]; position by spectral division (bound) or cumulative
/// trapezoid integration of the velocity (free particle).
Trajectory solve_motion_frequency(const TransferFunction& tf, const NoiseRealization& noise);
Trajectory solve_motion_frequency(const MechanicalSystem& sys, const NoiseRealization& noise);

struct TrajectoryEnsemble {
    double dt{1.0};
    double mass{1.0};
    double spring{0.0};
    std::uint64_t master_seed{0};
    std::vector<Trajectory> trajectories;
};

/// n_traj independent trajectories, stream index = trajectory index.
/// Identical output for any n_threads.
TrajectoryEnsemble run_ensemble(const MechanicalSystem& sys, const ComplexSpectrum& c_sym,
                                int n_traj, double duration, double dt,
                                std::uint64_t master_seed, int n_threads = 1);

struct Estimate {
    double value{0.0};
    double std_error{0.0};
};

/// Momentum diffusion from the ensemble variance growth of p = m v over the
/// fit window [t0, t1]: D = slope/2. Free particle only (K = 0).
Estimate estimate_diffusion(const TrajectoryEnsemble& ens, double t0, double t1);

/// Stationary <q^2> over [discard_time, end]; bound particle (K > 0).
Estimate estimate_equilibrium_variance(const TrajectoryEnsemble& ens, double discard_time);

/// Ensemble-mean periodogram |F_k|^2 dt/n on the FFT bins (two-sided PSD
/// estimator consistent with synthesize_noise).
struct Periodogram {
    Eigen::ArrayXd freq;  // angular frequencies, k <= n/2 bins
    Eigen::ArrayXd power;
};
Periodogram mean_periodogram(const std::vector<NoiseRealization>& noises);

/// Welch estimate: segments of length `segment` with 50% overlap, Hann
/// window, averaged over segments and realizations.
Periodogram welch_periodogram(const std::vector<NoiseRealization>& noises, int segment);

} // namespace qle
