#include "qle/radiation_pressure.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qle/errors.hpp"
#include "qle/quadrature.hpp"

namespace qle {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Largest u with meaningful e^{-u}; beyond this thermal weights underflow.
constexpr double kBoseCut = 60.0;

cplx alpha_of(const SMatrixModel& m, double a, double b) {
    const RS x = rs_interp(m, a);
    const RS y = rs_interp(m, b);
    return 1.0 - x.s * y.s + x.r * y.r;
}

// Geometric breakpoint fan around a feature location, resolving structure of
// the given scale however small it is relative to the interval.
void add_feature(std::vector<double>& bps, double center, double scale, double upper) {
    if (!(scale > 0.0)) return;
    if (center > 0.0 && center < upper) bps.push_back(center);
    for (double d = scale; d < 2.0 * (upper + std::fabs(center)); d *= 2.0) {
        const double lo = center - d;
        const double hi = center + d;
        if (lo > 0.0 && lo < upper) bps.push_back(lo);
        if (hi > 0.0 && hi < upper) bps.push_back(hi);
    }
}

// Integrate over [0, upper] split at the given breakpoints, so localized
// features are always resolved by the adaptive rule. Segments beyond the
// dominant ones inherit an absolute-tolerance floor from the running total:
// their integrands may carry cancellation noise far above any relative
// tolerance on their own (tiny) values.
template <class F>
auto integrate_segmented(const F& f, double upper, std::vector<double> bps,
                         const QuadOptions& opt) -> decltype(f(upper)) {
    using T = decltype(f(upper));
    bps.push_back(0.0);
    bps.push_back(upper);
    std::sort(bps.begin(), bps.end());
    T total{};
    double prev = 0.0;
    bool started = false;
    for (double b : bps) {
        if (b < 0.0) continue;
        if (b > upper) break;
        if (started && b > prev + 1e-300) {
            QuadOptions local = opt;
            local.abs_tol = std::max(opt.abs_tol,
                                     opt.rel_tol * detail::norm_of<T>(total) / 16.0);
            total += integrate(f, prev, b, local);
        }
        prev = b;
        started = true;
    }
    return total;
}

} // namespace

ScatterKernels alpha_beta_gamma(const SMatrixModel& model, double omega, double omega_prime) {
    const RS x = rs_interp(model, omega);
    const RS y = rs_interp(model, omega_prime);
    const cplx alpha = 1.0 - x.s * y.s + x.r * y.r;
    const cplx beta = x.s * y.r - x.r * y.s;
    return {alpha, beta, std::norm(alpha) + std::norm(beta)};
}

double thermal_sigma(double temperature, double omega) {
    if (temperature == 0.0) return 0.25 * std::fabs(omega);
    const double x = omega / (2.0 * temperature);
    if (std::fabs(x) < 1e-4) {
        // (w/4) coth(w/2T) = (T/2)(1 + x^2/3 - x^4/45 + ...)
        const double x2 = x * x;
        return 0.5 * temperature * (1.0 + x2 / 3.0 - x2 * x2 / 45.0);
    }
    return 0.25 * omega / std::tanh(x);
}

double thermal_sigma_excess(double temperature, double omega) {
    if (temperature == 0.0) return 0.0;
    const double a = std::fabs(omega);
    const double x = a / temperature;
    if (x > 700.0) return 0.0;
    if (x < 1e-8) return 0.5 * temperature - 0.25 * a; // limit T/2
    return 0.5 * a / std::expm1(x);
}

double thermal_c(double temperature, double omega) {
    // c(w) = (w/2)/(1 - e^{-w/T}); the xi + sigma form cancels catastrophically
    // for w << -T, so use the Bose form on the negative side
    if (omega >= 0.0) return 0.5 * omega + 0.5 * bose_weight(temperature, omega);
    return 0.5 * bose_weight(temperature, -omega);
}

double bose_weight(double temperature, double omega) {
    if (temperature == 0.0) return 0.0;
    const double x = omega / temperature;
    if (x > 700.0) return 0.0;
    if (std::fabs(x) < 1e-8) return temperature * (1.0 - 0.5 * x);
    return omega / std::expm1(x);
}

cplx vacuum_susceptibility(const SMatrixModel& model, double omega, double rel_tol) {
    if (omega == 0.0) return {0.0, 0.0};
    QuadOptions opt;
    opt.rel_tol = rel_tol;
    auto integrand = [&](double w) -> cplx {
        return w * (omega - w) * alpha_of(model, w, omega - w);
    };
    const double a = std::fabs(omega);
    const double sgn = omega > 0.0 ? 1.0 : -1.0;
    auto folded = [&](double w) { return integrand(sgn * w); };
    std::vector<double> bps;
    add_feature(bps, 0.0, structure_scale(model), a);
    add_feature(bps, a, structure_scale(model), a);
    const cplx val = sgn * integrate_segmented(folded, a, std::move(bps), opt);
    return cplx(0.0, 1.0) * val / (2.0 * kPi);
}

cplx thermal_susceptibility(const SMatrixModel& model, const ThermalState& state,
                            double omega, double rel_tol) {
    const cplx chi0 = vacuum_susceptibility(model, omega, rel_tol);
    const double T = state.temperature;
    if (T == 0.0) return chi0;
    QuadOptions opt;
    opt.rel_tol = rel_tol;
    auto integrand = [&](double w) -> cplx {
        const cplx brace = (omega + w) * alpha_of(model, -w, omega + w) +
                           (omega - w) * alpha_of(model, w, omega - w);
        return bose_weight(T, w) * brace;
    };
    // the Bose factor confines the support to [0, kBoseCut*T]; the scatterer
    // kernels vary near w' ~ 0 and w' ~ |omega| on the model's own scale
    const double upper = kBoseCut * T;
    std::vector<double> bps;
    add_feature(bps, 0.0, structure_scale(model), upper);
    add_feature(bps, std::fabs(omega), structure_scale(model), upper);
    const cplx val = integrate_segmented(integrand, upper, std::move(bps), opt);
    return chi0 + cplx(0.0, 1.0) * val / kPi;
}

double force_commutator_thermal(const SMatrixModel& model, const ThermalState& state,
                                double omega, double rel_tol) {
    const double T = state.temperature;
    if (T == 0.0 || omega == 0.0) return 0.0;
    const double a = std::fabs(omega);
    QuadOptions opt;
    opt.rel_tol = rel_tol;
    auto th = [&](double v) {
        const double h = (omega / 2.0 - v) * thermal_sigma_excess(T, omega / 2.0 + v) +
                         (omega / 2.0 + v) * thermal_sigma_excess(T, omega / 2.0 - v);
        return alpha_beta_gamma(model, omega / 2.0 + v, omega / 2.0 - v).gamma * h;
    };
    const double upper = 0.5 * a + kBoseCut * T;
    // sigma excess lives where either leg is within ~60T of zero; the kernels
    // vary near v ~ 0 and v ~ a/2 on the model scale
    std::vector<double> bps;
    add_feature(bps, 0.5 * a, T, upper);
    add_feature(bps, 0.5 * a, structure_scale(model), upper);
    add_feature(bps, 0.0, std::max(T, structure_scale(model)), upper);
    return integrate_segmented(th, upper, std::move(bps), opt) / kPi;
}

double force_commutator(const SMatrixModel& model, const ThermalState& state,
                        double omega, double rel_tol) {
    if (omega == 0.0) return 0.0;
    const double a = std::fabs(omega);
    const double sign = omega > 0.0 ? 1.0 : -1.0;
    QuadOptions opt;
    opt.rel_tol = rel_tol;

    // Vacuum part: xi_0(a) = (1/2pi) int_0^{a/2} u (a-u) gamma(u, a-u) du,
    // the [0, a] form folded about a/2. gamma varies near u ~ 0 on the model
    // scale only (a - u stays >= a/2).
    auto vac = [&](double u) {
        return u * (a - u) * alpha_beta_gamma(model, u, a - u).gamma;
    };
    std::vector<double> bps;
    add_feature(bps, 0.0, structure_scale(model), 0.5 * a);
    const double value =
        sign * integrate_segmented(vac, 0.5 * a, std::move(bps), opt) / (2.0 * kPi);
    return value + force_commutator_thermal(model, state, omega, rel_tol);
}

double force_spectrum(const SMatrixModel& model, const ThermalState& state,
                      double omega, double rel_tol) {
    const double T = state.temperature;
    QuadOptions opt;
    opt.rel_tol = rel_tol;
    // Integrand is symmetric about w/2; fold and integrate v >= 0.
    auto f = [&](double v) {
        return thermal_c(T, omega / 2.0 + v) * thermal_c(T, omega / 2.0 - v) *
               alpha_beta_gamma(model, omega / 2.0 + v, omega / 2.0 - v).gamma;
    };
    const double a = std::fabs(omega);
    const double upper = 0.5 * a + (T > 0.0 ? kBoseCut * T : 0.0);
    if (T == 0.0 && omega <= 0.0) return 0.0;
    std::vector<double> bps;
    add_feature(bps, 0.5 * a, std::max(T, 1e-3 * a), upper);
    add_feature(bps, 0.5 * a, structure_scale(model), upper);
    add_feature(bps, 0.0, std::max(T, structure_scale(model)), upper);
    return 4.0 / kPi * integrate_segmented(f, upper, std::move(bps), opt);
}

Quasistatic quasistatic_coefficients(const SMatrixModel& model, const ThermalState& state,
                                     double rel_tol) {
    const double T = state.temperature;
    if (T == 0.0) return {0.0, 0.0}; // Lorentz invariance of the vacuum
    if (is_tabulated(model))
        throw unsupported_continuation("quasistatic coefficients need off-grid derivatives");
    QuadOptions opt;
    opt.rel_tol = rel_tol;

    // Taylor expansion of the thermal correction about w = 0, with
    // d2* = derivative of alpha(a, b) in its second argument:
    //   friction       = (2/pi) int n w [ Re alpha(w,-w) - w Re d2alpha(w,-w) ] dw
    //   half curvature = -(1/pi) int n w [ 2 Im d2alpha(w,-w) - w Im d22alpha(w,-w) ] dw
    auto kernels = [&](double w, cplx& al, cplx& dal, cplx& d2al) {
        const RSDerivs u = eval_rs_derivs(model, w);
        const RSDerivs v = eval_rs_derivs(model, -w);
        al = 1.0 - u.s * v.s + u.r * v.r;
        dal = -u.s * v.ds + u.r * v.dr;
        d2al = -u.s * v.d2s + u.r * v.d2r;
    };
    auto fr = [&](double w) {
        cplx al, dal, d2al;
        kernels(w, al, dal, d2al);
        return bose_weight(T, w) * (al.real() - w * dal.real());
    };
    auto cu = [&](double w) {
        cplx al, dal, d2al;
        kernels(w, al, dal, d2al);
        return bose_weight(T, w) * (2.0 * dal.imag() - w * d2al.imag());
    };
    const double upper = kBoseCut * T;
    std::vector<double> bps;
    add_feature(bps, 0.0, structure_scale(model), upper);
    const double friction = 2.0 / kPi * integrate_segmented(fr, upper, bps, opt);
    const double half_curv = -1.0 / kPi * integrate_segmented(cu, upper, bps, opt);
    return {friction, half_curv};
}

cplx small_T_correction(const SMatrixModel& model, const ThermalState& state, double omega) {
    const double T = state.temperature;
    if (T == 0.0) return {0.0, 0.0};
    return cplx(0.0, kPi * T * T / 3.0) * omega * alpha_of(model, 0.0, omega);
}

double momentum_diffusion(const SMatrixModel& model, const ThermalState& state,
                          double rel_tol) {
    if (state.temperature == 0.0) return 0.0; // momentum conservation in vacuum
    return state.temperature * quasistatic_coefficients(model, state, rel_tol).friction;
}

} // namespace qle
