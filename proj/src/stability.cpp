#include "qle/stability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "qle/errors.hpp"
#include "qle/quadrature.hpp"
#include "qle/radiation_pressure.hpp"

namespace qle {

namespace {

constexpr double kPi = 3.14159265358979323846;

cplx spectral_term(const SpectralMeasure& measure, cplx p) {
    return std::visit(
        [&](const auto& m) -> cplx {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, NoMeasure>) {
                return {0.0, 0.0};
            } else if constexpr (std::is_same_v<M, ConstantMeasure>) {
                // (2p/pi) c int_0^inf dk/(p^2+k^2) = c for Re p > 0
                return {m.value, 0.0};
            } else {
                const int n = static_cast<int>(m.k.size());
                cplx sum(0.0, 0.0);
                const cplx p2 = p * p;
                for (int j = 0; j < n; ++j) {
                    const double wt = (j == 0 || j == n - 1) ? 0.5 : 1.0;
                    sum += wt * m.value[j] / (p2 + m.k[j] * m.k[j]);
                }
                sum *= (m.k[n - 1] - m.k[0]) / (n - 1);
                cplx tail(0.0, 0.0);
                if (m.tail.valid) {
                    const double W = m.k[n - 1];
                    QuadOptions opt;
                    opt.rel_tol = 1e-9;
                    auto f = [&](double t) -> cplx {
                        const double k = W / t;
                        const double g = m.tail.amplitude * std::pow(k, m.tail.exponent);
                        return g / (p2 + k * k) * (W / (t * t));
                    };
                    tail = integrate(f, 0.0, 1.0, opt);
                }
                return 2.0 * p / kPi * (sum + tail);
            }
        },
        measure);
}

double model_scale(const ImpedanceModel& model) {
    double s = 1.0;
    const double m = std::fabs(model.m);
    if (m > 0.0) {
        if (model.K > 0.0) s = std::max(s, std::sqrt(model.K / m));
        if (model.friction > 0.0) s = std::max(s, model.friction / m);
    }
    if (model.al_coeff > 0.0 && model.m != 0.0)
        s = std::max(s, 1.5 * std::fabs(model.m) / model.al_coeff);
    return s;
}

} // namespace

double measure_min(const SpectralMeasure& m) {
    return std::visit(
        [&](const auto& mm) -> double {
            using M = std::decay_t<decltype(mm)>;
            if constexpr (std::is_same_v<M, NoMeasure>) return 0.0;
            else if constexpr (std::is_same_v<M, ConstantMeasure>) return mm.value;
            else return mm.value.size() ? mm.value.minCoeff() : 0.0;
        },
        m);
}

cplx impedance(const ImpedanceModel& model, cplx p) {
    if (!(p.real() > 0.0))
        throw std::domain_error("impedance: requires Re(p) > 0");
    cplx z = model.friction + model.m * p - model.al_coeff * p * p;
    if (model.K != 0.0) z += model.K / p;
    z += spectral_term(model.measure, p);
    return z;
}

cplx admittance(const ImpedanceModel& model, cplx p) {
    return 1.0 / impedance(model, p);
}

cplx impedance_omega(const ImpedanceModel& model, cplx omega) {
    const cplx p = cplx(0.0, -1.0) * omega; // p = -i w
    cplx z = model.friction + model.m * p - model.al_coeff * p * p;
    if (model.K != 0.0) z += model.K / p;
    z += spectral_term(model.measure, p);
    return z;
}

PassivityReport passivity_test(const ImpedanceModel& model, double eps, double P,
                               int n_re, int n_im) {
    if (!(eps > 0.0) || !(P > eps))
        throw std::invalid_argument("passivity_test: need 0 < eps < P");
    PassivityReport rep;
    rep.structural_ok = model.m >= 0.0 && model.K >= 0.0 && model.friction >= 0.0 &&
                        measure_min(model.measure) >= 0.0 && model.al_coeff == 0.0;
    double best = std::numeric_limits<double>::infinity();
    cplx arg(0.0, 0.0);
    for (int i = 0; i < n_re; ++i) {
        // logarithmic spacing in Re p, linear in Im p
        const double x = eps * std::pow(P / eps, i / double(n_re - 1));
        for (int j = 0; j < n_im; ++j) {
            const double y = -P + 2.0 * P * j / double(n_im - 1);
            const cplx z = impedance(model, {x, y});
            if (z.real() < best) {
                best = z.real();
                arg = {x, y};
            }
        }
    }
    rep.min_re_Z = best;
    rep.argmin = arg;
    rep.passes = rep.structural_ok && best > 0.0;
    return rep;
}

namespace {

void collect_poles(const ImpedanceModel& model, const Rect& box,
                   std::vector<AdmittancePole>& out, int depth) {
    auto f = [&](cplx w) { return impedance_omega(model, w); };
    int wind;
    try {
        wind = winding_number(f, box);
    } catch (const contour_error&) {
        if (depth > 40) throw;
        // nudge the box slightly and retry once before subdividing
        Rect nudged = box;
        const double dy = 1e-3 * box.height();
        nudged.im_min += dy;
        nudged.im_max += dy;
        wind = winding_number(f, nudged);
    }
    if (wind == 0) return;
    const double min_size = 1e-7 * std::max(box.width(), box.height());
    if (wind == 1 || (box.width() < min_size && box.height() < min_size)) {
        // Newton refinement from the box center
        cplx w(0.5 * (box.re_min + box.re_max), 0.5 * (box.im_min + box.im_max));
        const double h = 1e-7 * std::max(box.width(), box.height());
        double scale = 0.0;
        for (int e = 0; e < 4; ++e) scale = std::max(scale, std::abs(f(box.corner(e))));
        for (int it = 0; it < 80; ++it) {
            const cplx fw = f(w);
            if (std::abs(fw) < 1e-12 * scale) break;
            const cplx df = (f(w + cplx(h, 0.0)) - f(w - cplx(h, 0.0))) / (2.0 * h);
            if (df == cplx(0.0, 0.0)) break;
            cplx step = fw / df;
            // keep the iterate inside the upper half plane
            if ((w - step).imag() <= 0.0) step *= 0.5;
            w -= step;
            if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(w))) break;
        }
        const cplx fw = f(w);
        const cplx df = (f(w + cplx(h, 0.0)) - f(w - cplx(h, 0.0))) / (2.0 * h);
        out.push_back({w, df != cplx(0.0, 0.0) ? 1.0 / df : cplx(0.0, 0.0), std::abs(fw)});
        return;
    }
    // bisect the longer side
    Rect a = box, b = box;
    if (box.width() > box.height()) {
        const double mid = 0.5 * (box.re_min + box.re_max);
        a.re_max = mid;
        b.re_min = mid;
    } else {
        const double mid = 0.5 * (box.im_min + box.im_max);
        a.im_max = mid;
        b.im_min = mid;
    }
    collect_poles(model, a, out, depth + 1);
    collect_poles(model, b, out, depth + 1);
}

} // namespace

std::vector<AdmittancePole> find_upper_half_poles(const ImpedanceModel& model,
                                                  const Rect& box) {
    if (!(box.im_min > 0.0))
        throw std::invalid_argument("find_upper_half_poles: box must lie strictly above the real axis");
    std::vector<AdmittancePole> out;
    collect_poles(model, box, out, 0);
    // deduplicate refined roots that landed on the same point
    std::vector<AdmittancePole> uniq;
    for (const auto& p : out) {
        bool dup = false;
        for (const auto& q : uniq)
            if (std::abs(p.location - q.location) <
                1e-6 * std::max({1.0, std::abs(p.location), std::abs(q.location)}))
                dup = true;
        if (!dup) uniq.push_back(p);
    }
    return uniq;
}

ClassificationReport classify_motion(const ImpedanceModel& model) {
    ClassificationReport rep;
    const double s = model_scale(model);
    rep.passivity = passivity_test(model, 1e-3 * s, 10.0 * s);
    rep.searched_box = Rect{-3.0 * s, 3.0 * s, 1e-3 * s, 5.0 * s};
    if (rep.passivity.passes) {
        rep.cls = MotionClass::stable_causal;
        return rep;
    }
    rep.poles = find_upper_half_poles(model, rep.searched_box);
    if (!rep.poles.empty()) {
        rep.cls = MotionClass::runaway;
        rep.preacceleration_variant = true;
    } else {
        rep.cls = MotionClass::noncausal_preacceleration;
    }
    return rep;
}

const char* to_string(MotionClass c) {
    switch (c) {
        case MotionClass::stable_causal: return "stable_causal";
        case MotionClass::runaway: return "runaway";
        default: return "noncausal_preacceleration";
    }
}

ImpedanceModel impedance_model_from(const MechanicalSystem& sys,
                                    const ImpedanceBuildOptions& opt) {
    return std::visit(
        [&](const auto& c) -> ImpedanceModel {
            using C = std::decay_t<decltype(c)>;
            ImpedanceModel z;
            z.K = sys.spring_constant;
            if constexpr (std::is_same_v<C, BrownianKernel>) {
                z.m = sys.bare_mass.value_or(1.0);
                z.measure = ConstantMeasure{c.diffusion / c.temperature};
            } else if constexpr (std::is_same_v<C, AbrahamLorentzCoupling>) {
                if (!sys.quasistatic_mass)
                    throw std::invalid_argument("AL impedance: quasistatic mass required");
                z.m = *sys.quasistatic_mass;
                z.al_coeff = (2.0 / 3.0) * c.e2;
            } else if constexpr (std::is_same_v<C, LinearCoupling>) {
                if (!sys.bare_mass)
                    throw std::invalid_argument("charge impedance: bare mass required");
                z.m = *sys.bare_mass;
                double k_max = opt.k_max;
                if (k_max <= 0.0) {
                    k_max = 50.0;
                    if (const auto* m = std::get_if<ModelFormFactor>(&c.regulator))
                        k_max = 50.0 * m->cutoff;
                }
                SampledMeasure sm;
                sm.k.resize(opt.n_k);
                sm.value.resize(opt.n_k);
                for (int j = 0; j < opt.n_k; ++j) {
                    const double k = k_max * j / double(opt.n_k - 1);
                    sm.k[j] = k;
                    sm.value[j] = (2.0 / 3.0) * c.charge_squared * k * k *
                                  regulator_value(c.regulator, k);
                }
                sm.tail = fit_power_law(sm.k, sm.value);
                z.measure = std::move(sm);
            } else { // scatterer
                if (!sys.quasistatic_mass)
                    throw std::invalid_argument("scatterer impedance: quasistatic mass M_0 required");
                const auto& model = c.model;
                const auto& state = c.state;
                double k_max = opt.k_max;
                double cutoff_scale = 1.0;
                if (const auto* rc = std::get_if<ResonanceCutoff>(&model))
                    cutoff_scale = rc->cutoff;
                if (k_max <= 0.0)
                    k_max = 60.0 * cutoff_scale + 30.0 * state.temperature;

                const Quasistatic qs = is_tabulated(model) || state.temperature == 0.0
                                           ? Quasistatic{0.0, 0.0}
                                           : quasistatic_coefficients(model, state);
                z.friction = qs.friction;

                auto xi0 = [&](double k) {
                    return force_commutator(model, ThermalState{0.0}, k, opt.rel_tol);
                };
                z.mu_0 = induced_mass_vacuum_fn(xi0, cutoff_scale, opt.rel_tol);
                z.m = *sys.quasistatic_mass - z.mu_0;
                z.mu_T = z.mu_0;
                if (state.temperature > 0.0) {
                    auto xith = [&](double k) {
                        return force_commutator_thermal(model, state, k, opt.rel_tol);
                    };
                    z.mu_T += thermal_mass_shift_fn(
                        xith, qs.friction,
                        std::max(cutoff_scale, state.temperature), opt.rel_tol);
                }

                SampledMeasure sm;
                sm.k.resize(opt.n_k);
                sm.value.resize(opt.n_k);
                for (int j = 0; j < opt.n_k; ++j) {
                    const double k = k_max * j / double(opt.n_k - 1);
                    sm.k[j] = k;
                    sm.value[j] =
                        (j == 0) ? qs.friction
                                 : force_commutator(model, state, k, opt.rel_tol) / k;
                }
                sm.tail = fit_power_law(sm.k, sm.value);
                z.measure = std::move(sm);
            }
            return z;
        },
        sys.coupling);
}

std::string classification_to_json(const ClassificationReport& rep,
                                   const ImpedanceModel& model) {
    nlohmann::json j;
    j["class"] = to_string(rep.cls);
    j["min_re_Z"] = rep.passivity.min_re_Z;
    j["poles"] = nlohmann::json::array();
    for (const auto& p : rep.poles)
        j["poles"].push_back({{"re", p.location.real()},
                              {"im", p.location.imag()},
                              {"abs_Z", p.abs_Z}});
    j["structural"] = {{"m", model.m},
                       {"K", model.K},
                       {"friction", model.friction},
                       {"measure_min", measure_min(model.measure)},
                       {"al_coeff", model.al_coeff}};
    if (rep.preacceleration_variant)
        j["boundary_condition_variant"] = "noncausal_preacceleration";
    return j.dump(2);
}

} // namespace qle
