// system.hpp — Mechanical system = masses + spring + coupling descriptor.
//
// Mass bookkeeping: the spectral decomposition of the impedance carries the
// high-frequency mass m, related to the quasistatic mass through the induced
// mass, M = m + mu. Which of the two the user specifies depends on the
// coupling: the scatterer is parameterized by its vacuum quasistatic mass
// M_0, the regulated charge by its bare mass m, the renormalized
// Abraham-Lorentz charge by its (finite) quasistatic mass M.

#pragma once

#include <optional>
#include <variant>

#include "qle/linear_coupling.hpp"
#include "qle/smatrix.hpp"
#include "qle/spectrum.hpp"

namespace qle {

/// White-noise bath: C_FF = 2D, chi(w) = i(D/T)w.
struct BrownianKernel {
    double diffusion{1.0};
    double temperature{1.0};
};

/// Radiation-pressure coupling of a point scatterer to a thermal field.
struct ScattererCoupling {
    SMatrixModel model;
    ThermalState state;
};

/// Renormalized point charge in the infinite-cutoff limit: motional force
/// (2/3) e^2 q''' (the bare mass is infinitely negative and absorbed).
struct AbrahamLorentzCoupling {
    double e2{1.0};
};

using Coupling =
    std::variant<LinearCoupling, ScattererCoupling, BrownianKernel, AbrahamLorentzCoupling>;

struct MechanicalSystem {
    std::optional<double> bare_mass;        // high-frequency mass m
    std::optional<double> quasistatic_mass; // M (M_0 for the scatterer)
    double spring_constant{0.0};            // K; negative allowed but unbound
    Coupling coupling{BrownianKernel{}};

    bool bound() const { return spring_constant > 0.0; }
};

MechanicalSystem make_brownian_system(double mass, double spring, double diffusion,
                                      double temperature);
MechanicalSystem make_charge_system(double bare_mass, double spring, LinearCoupling c);
MechanicalSystem make_scatterer_system(double quasistatic_mass, double spring,
                                       SMatrixModel model, ThermalState state);

/// System with impedance Z(w) = -iMw + iK/w + (2/3)e^2 w^2 (the classical
/// radiative-reaction equation). Requires e2 > 0; K < 0 is allowed and
/// reported unbound.
MechanicalSystem abraham_lorentz_system(double quasistatic_mass, double e2, double spring);

/// Motional susceptibility on the real axis for the system's coupling.
cplx system_susceptibility(const MechanicalSystem& sys, double omega,
                           double rel_tol = 1e-10);

/// The mass entering the equation of motion m_eff q'' = ... - K q + chi*q + F:
/// quasistatic mass for AL, bare/high-frequency mass otherwise.
double equation_mass(const MechanicalSystem& sys);

} // namespace qle
