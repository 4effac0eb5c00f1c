// linear_coupling.hpp — Point charge linearly coupled to the electromagnetic
// field (dipole approximation), plus the generic 1d linear-coupling
// susceptibility.
//
// The charge enters through xi_FF(w) = (2/3) e^2 w^3 Omega(|w|) with Omega a
// regulating form factor; the motional susceptibility follows from the
// once-subtracted dispersion relation (chi(0) = 0 by translation invariance).

#pragma once

#include <functional>
#include <variant>

#include "qle/spectrum.hpp"

namespace qle {

/// Omega(k) = (W^2 / (W^2 + k^2))^2 with cutoff W.
struct ModelFormFactor {
    double cutoff{1.0};
};

/// Form factor sampled on k >= 0; linear interpolation, zero beyond the table.
struct TabulatedRegulator {
    Eigen::ArrayXd k;
    Eigen::ArrayXd value;
};

/// Arbitrary callable form factor (test probes, e.g. the unregulated
/// constant Omega(k) = 1 whose induced mass diverges).
struct CustomRegulator {
    std::function<double(double)> fn;
};

using Regulator = std::variant<ModelFormFactor, TabulatedRegulator, CustomRegulator>;

/// Omega(|k|); even in k, in [0, 1] for physical regulators.
double regulator_value(const Regulator& reg, double k);

struct LinearCoupling {
    double charge_squared{1.0}; // e^2 > 0
    Regulator regulator{ModelFormFactor{}};
};

/// Motional susceptibility of the regulated charge at Im(omega) >= 0.
/// ModelFormFactor uses the closed form -(e^2/3) W^3 w^2/(w+iW)^2; other
/// regulators evaluate the subtracted dispersion integral (principal value
/// plus half-residue on the real axis). Throws std::domain_error for
/// Im(omega) < 0.
cplx charge_susceptibility(const LinearCoupling& c, cplx omega, double rel_tol = 1e-10);

/// xi_FF(w) = (2/3) e^2 w^3 Omega(|w|); real and odd.
double charge_force_commutator(const LinearCoupling& c, double omega);

/// Induced mass mu = 2/pi int_0^inf xi_FF(k)/k^3 dk = (4 e^2 / 3 pi) int Omega.
/// Detects non-integrable regulators via tail doubling -> divergence_error.
double induced_mass_charge(const LinearCoupling& c, double rel_tol = 1e-10);

/// Coupling amplitude table e(w, k) for the generic 1d model; reality
/// requires conj(e(w,k)) = e(-w,-k).
struct CouplingTable {
    std::function<cplx(double, double)> e;
    double k_max{50.0}; // quadrature support |k| <= k_max
};

/// xi_FF(w) = ( e(w,w)e(-w,-w) + e(w,-w)e(-w,w) ) / (4 w).
double generic_force_commutator(const CouplingTable& table, double omega);

/// chi(w) = -(1/2pi) PV int dk e(w,k)e(-w,-k) / (w^2 - k^2) + i xi_FF(w).
/// Throws std::invalid_argument when the reality condition fails on samples.
cplx generic_linear_susceptibility(const CouplingTable& table, double omega,
                                   double rel_tol = 1e-10);

} // namespace qle
