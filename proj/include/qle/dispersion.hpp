// dispersion.hpp — Subtracted Hilbert/Kramers-Kronig transforms relating the
// force commutator xi to the causal susceptibility chi, induced-mass
// integrals, and fluctuation-dissipation / detailed-balance residuals.
//
// Subtraction point is always w = 0 (chi(0) = 0 by translation invariance).
// With n subtractions the caller provides the Taylor coefficients
// chi'(0), (1/2) chi''(0), ... up to order n-1; the linear coefficient's
// imaginary part must equal xi'(0).

#pragma once

#include <functional>
#include <vector>

#include "qle/spectrum.hpp"

namespace qle {

/// Power-law model xi(w) ~ amplitude * w^exponent fitted over the last decade
/// of the positive-frequency samples; used to extend grid integrals to
/// infinity.
struct TailFit {
    double amplitude{0.0};
    double exponent{0.0};
    bool valid{false};
};

TailFit fit_power_law_tail(const ComplexSpectrum& xi);

/// Same fit on raw (k, y) samples; uses the last decade of k.
TailFit fit_power_law(const Eigen::ArrayXd& k, const Eigen::ArrayXd& y);

/// chi on the same grid as xi from the n-subtracted dispersion relation,
/// n in {0,1,2,3}. Principal values use singularity subtraction on the
/// uniform grid; beyond the grid xi is extended by the fitted tail.
/// Throws divergence_error when the tail decays too slowly for n
/// subtractions, std::invalid_argument for malformed input.
ComplexSpectrum kk_transform(const ComplexSpectrum& xi, int subtractions,
                             const std::vector<cplx>& taylor_coeffs = {});

/// Same dispersion integral evaluated at one complex frequency with
/// Im(omega) > 0 (no principal value needed). Used for Laplace-domain
/// causality checks: chi{p} = chi[i p].
cplx kk_eval_upper(const ComplexSpectrum& xi, int subtractions,
                   const std::vector<cplx>& taylor_coeffs, cplx omega);

/// max_j |Im chi_j - xi_j| / max_j |xi_j|. Grids must match.
double fdt_residual(const ComplexSpectrum& chi, const ComplexSpectrum& xi);

/// T > 0: max_j |(1 - e^{-w/T}) C_FF - 2 xi| / max |2 xi|.
/// T = 0: vacuum path, max_{w<0} |C_FF| / max |C_FF|.
double detailed_balance_residual(const ComplexSpectrum& c_ff,
                                 const ComplexSpectrum& xi, double temperature);

/// mu_0 = 2/pi int_0^inf xi_0(k)/k^3 dk from samples; grid part plus fitted
/// tail. Divergence (tail exponent >= 2) -> divergence_error.
struct InducedMass {
    double value;
    double grid_part;
    double tail_part;
};
InducedMass induced_mass_vacuum(const ComplexSpectrum& xi0);

/// mu_T and the thermal mass shift, computed as a difference integral
///   mu_T - mu_0 = 2/pi int_0^inf (xi_T - xi_0 - friction*k)/k^3 dk
/// whose integrand is finite at 0 and decays like 1/k^2 (fitted tail added).
struct ThermalMass {
    double mu_T;
    double mu_0;
    double half_curvature; // = mu_T - mu_0 = (1/2) chi_T''(0)
};
ThermalMass induced_mass_thermal(const ComplexSpectrum& xi_T,
                                 const ComplexSpectrum& xi_0, double friction);

/// Callable-based precision routes used by the acceptance checks: adaptive
/// quadrature with doubling cutoff and k^-2 tail extrapolation.
double induced_mass_vacuum_fn(const std::function<double(double)>& xi0,
                              double k_scale, double rel_tol = 1e-9);
double thermal_mass_shift_fn(const std::function<double(double)>& xi_thermal,
                             double friction, double k_scale, double rel_tol = 1e-9);

} // namespace qle
