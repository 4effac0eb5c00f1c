#include "qle/system.hpp"

#include <stdexcept>

#include "qle/radiation_pressure.hpp"

namespace qle {

MechanicalSystem make_brownian_system(double mass, double spring, double diffusion,
                                      double temperature) {
    if (!(diffusion >= 0.0) || !(temperature > 0.0))
        throw std::invalid_argument("brownian system: D >= 0 and T > 0 required");
    MechanicalSystem s;
    s.bare_mass = mass;
    s.quasistatic_mass = mass; // no mass renormalization for white noise
    s.spring_constant = spring;
    s.coupling = BrownianKernel{diffusion, temperature};
    return s;
}

MechanicalSystem make_charge_system(double bare_mass, double spring, LinearCoupling c) {
    if (!(c.charge_squared > 0.0))
        throw std::invalid_argument("charge system: e^2 > 0 required");
    MechanicalSystem s;
    s.bare_mass = bare_mass;
    s.spring_constant = spring;
    s.coupling = std::move(c);
    return s;
}

MechanicalSystem make_scatterer_system(double quasistatic_mass, double spring,
                                       SMatrixModel model, ThermalState state) {
    MechanicalSystem s;
    s.quasistatic_mass = quasistatic_mass;
    s.spring_constant = spring;
    s.coupling = ScattererCoupling{std::move(model), state};
    return s;
}

MechanicalSystem abraham_lorentz_system(double quasistatic_mass, double e2, double spring) {
    if (!(e2 > 0.0))
        throw std::invalid_argument("abraham_lorentz_system: e^2 > 0 required");
    MechanicalSystem s;
    s.quasistatic_mass = quasistatic_mass; // bare mass is -inf, left unset
    s.spring_constant = spring;
    s.coupling = AbrahamLorentzCoupling{e2};
    return s;
}

cplx system_susceptibility(const MechanicalSystem& sys, double omega, double rel_tol) {
    return std::visit(
        [&](const auto& c) -> cplx {
            using C = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<C, LinearCoupling>) {
                return charge_susceptibility(c, cplx(omega, 0.0), rel_tol);
            } else if constexpr (std::is_same_v<C, ScattererCoupling>) {
                return thermal_susceptibility(c.model, c.state, omega, rel_tol);
            } else if constexpr (std::is_same_v<C, BrownianKernel>) {
                return cplx(0.0, c.diffusion / c.temperature * omega);
            } else {
                return cplx(0.0, (2.0 / 3.0) * c.e2 * omega * omega * omega);
            }
        },
        sys.coupling);
}

double equation_mass(const MechanicalSystem& sys) {
    // the scatterer's Langevin equation carries its vacuum quasistatic mass;
    // the regulated charge carries its bare mass
    if (std::holds_alternative<ScattererCoupling>(sys.coupling) ||
        std::holds_alternative<AbrahamLorentzCoupling>(sys.coupling)) {
        if (!sys.quasistatic_mass)
            throw std::invalid_argument("system: quasistatic mass required");
        return *sys.quasistatic_mass;
    }
    if (!sys.bare_mass) throw std::invalid_argument("system: bare mass required");
    return *sys.bare_mass;
}

} // namespace qle
