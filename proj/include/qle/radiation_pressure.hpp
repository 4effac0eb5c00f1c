// radiation_pressure.hpp — Radiation-pressure kernels and response functions
// for a point scatterer of a scalar field in 2d space-time.
//
// Spectral functions of the input field (reduced units):
//   xi(w)    = w/4                      state-independent commutator
//   sigma(w) = (w/4) coth(w/2T)         thermal anticommutator, even
//   c(w)     = xi(w) + sigma(w) = (w/2) / (1 - e^{-w/T})
//
// Susceptibilities are normalized so that Im chi = xi_FF with xi_FF real and
// odd; the vacuum and thermal pieces are evaluated by separate quadratures so
// the fluctuation-dissipation relation remains a nontrivial cross-check.

#pragma once

#include "qle/smatrix.hpp"
#include "qle/spectrum.hpp"

namespace qle {

/// Scattering kernels entering the force correlations:
///   alpha(w,w') = 1 - s(w)s(w') + r(w)r(w')
///   beta(w,w')  = s(w)r(w') - r(w)s(w')
///   gamma       = |alpha|^2 + |beta|^2   (= 2 Re alpha for unitary models)
struct ScatterKernels {
    cplx alpha;
    cplx beta;
    double gamma;
};

ScatterKernels alpha_beta_gamma(const SMatrixModel& model, double omega, double omega_prime);

/// sigma(w) = (w/4) coth(w/2T); returns |w|/4 at T = 0 and T/2 at w = 0.
double thermal_sigma(double temperature, double omega);

/// c(w) = xi(w) + sigma(w); vanishes for w < 0 at T = 0.
double thermal_c(double temperature, double omega);

/// sigma(w) - |w|/4, the exponentially decaying thermal excess.
double thermal_sigma_excess(double temperature, double omega);

/// w * n(w) with n the Bose factor, stable near w = 0 (limit T).
double bose_weight(double temperature, double omega);

/// Vacuum susceptibility chi_0(w) = i/(2 pi) * int_0^w dw' w'(w-w') alpha(w', w-w').
cplx vacuum_susceptibility(const SMatrixModel& model, double omega,
                           double rel_tol = 1e-10);

/// Thermal susceptibility chi_T = chi_0 + Bose-weighted correction; equals
/// chi_0 at T = 0.
cplx thermal_susceptibility(const SMatrixModel& model, const ThermalState& state,
                            double omega, double rel_tol = 1e-10);

/// Force-commutator spectrum xi_T(w): convolution of sigma with gamma over a
/// window symmetric about w/2 (both field legs inside the band). Real, odd;
/// satisfies Im chi_T = xi_T.
double force_commutator(const SMatrixModel& model, const ThermalState& state,
                        double omega, double rel_tol = 1e-10);

/// The temperature-dependent part alone, xi_T(w) - xi_0(w), computed from the
/// exponentially decaying sigma excess (no large-argument cancellation).
double force_commutator_thermal(const SMatrixModel& model, const ThermalState& state,
                                double omega, double rel_tol = 1e-10);

/// Force spectrum C_FF(w) = int dw'/2pi 4 c(w') c(w-w') gamma(w', w-w').
/// Nonnegative; vanishes for w < 0 at T = 0.
double force_spectrum(const SMatrixModel& model, const ThermalState& state,
                      double omega, double rel_tol = 1e-10);

/// Quasistatic responses: friction = xi_T'(0) = Im chi_T'(0) and the mass
/// correction half_curvature = (1/2) Re chi_T''(0). Both vanish at T = 0.
struct Quasistatic {
    double friction;
    double half_curvature;
};
Quasistatic quasistatic_coefficients(const SMatrixModel& model, const ThermalState& state,
                                     double rel_tol = 1e-11);

/// Leading low-temperature correction (i pi T^2 / 3) w alpha(0, w).
cplx small_T_correction(const SMatrixModel& model, const ThermalState& state, double omega);

/// Momentum diffusion coefficient D = T xi_T'(0); zero in vacuum.
double momentum_diffusion(const SMatrixModel& model, const ThermalState& state,
                          double rel_tol = 1e-11);

} // namespace qle
