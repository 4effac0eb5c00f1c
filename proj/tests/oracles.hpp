// oracles.hpp — Test-only reference implementations, kept independent of the
// library's quadrature paths: plain midpoint Riemann sums, closed forms, and
// finite differences. Used to freeze expected values and to cross-check the
// adaptive routines at runtime.

#pragma once

#include <cmath>
#include <complex>
#include <functional>

#include "qle/smatrix.hpp"
#include "qle/spectrum.hpp"

namespace oracle {

using qle::cplx;

inline constexpr double kPi = 3.14159265358979323846;

inline cplx alpha(const qle::SMatrixModel& m, double a, double b) {
    const qle::RS x = qle::eval_rs(m, a);
    const qle::RS y = qle::eval_rs(m, b);
    return 1.0 - x.s * y.s + x.r * y.r;
}

inline double gamma_k(const qle::SMatrixModel& m, double a, double b) {
    const qle::RS x = qle::eval_rs(m, a);
    const qle::RS y = qle::eval_rs(m, b);
    const cplx al = 1.0 - x.s * y.s + x.r * y.r;
    const cplx be = x.s * y.r - x.r * y.s;
    return std::norm(al) + std::norm(be);
}

inline double sigma_ref(double T, double w) {
    if (T == 0.0) return 0.25 * std::fabs(w);
    if (w == 0.0) return 0.5 * T;
    return 0.25 * w / std::tanh(0.5 * w / T);
}

inline double c_ref(double T, double w) { return 0.25 * w + sigma_ref(T, w); }

/// Midpoint Riemann sum, n panels.
template <class F>
auto riemann(const F& f, double a, double b, int n) -> decltype(f(a)) {
    using T = decltype(f(a));
    T s{};
    const double h = (b - a) / n;
    for (int i = 0; i < n; ++i) s += f(a + (i + 0.5) * h);
    return s * h;
}

/// chi_0(w) = i/(2 pi) int_0^w dw' w'(w-w') alpha(w', w-w').
inline cplx chi0_riemann(const qle::SMatrixModel& m, double w, int n = 400000) {
    if (w == 0.0) return {0.0, 0.0};
    auto f = [&](double x) -> cplx { return x * (w - x) * alpha(m, x, w - x); };
    return cplx(0.0, 1.0) * riemann(f, 0.0, w, n) / (2.0 * kPi);
}

/// chi_T via the Bose-weighted correction on [0, 60T].
inline cplx chiT_riemann(const qle::SMatrixModel& m, double T, double w, int n = 400000) {
    const cplx c0 = chi0_riemann(m, w, n);
    if (T == 0.0) return c0;
    auto f = [&](double x) -> cplx {
        const cplx brace = (w + x) * alpha(m, -x, w + x) + (w - x) * alpha(m, x, w - x);
        return x / std::expm1(x / T) * brace;
    };
    return c0 + cplx(0.0, 1.0) * riemann(f, 0.0, 60.0 * T, n) / kPi;
}

/// Direct convolution form of the force commutator over the truncated band
/// w' in [w - L, L] (both field legs inside [-L, L]):
///   xi_T(w) = (1/pi) int dw' (w - w') sigma(w') gamma(w', w - w').
inline double xiT_band_riemann(const qle::SMatrixModel& m, double T, double w,
                               double L, int n = 400000) {
    auto f = [&](double x) {
        return (w - x) * sigma_ref(T, x) * gamma_k(m, x, w - x);
    };
    return riemann(f, w - L, L, n) / kPi;
}

/// C_FF over the same band.
inline double cff_band_riemann(const qle::SMatrixModel& m, double T, double w,
                               double L, int n = 400000) {
    auto f = [&](double x) {
        return 4.0 * c_ref(T, x) * c_ref(T, w - x) * gamma_k(m, x, w - x);
    };
    return riemann(f, w - L, L, n) / (2.0 * kPi);
}

/// Closed-form vacuum force commutator of the resonance-cutoff model:
/// xi_0(w) = (W^2/pi) [ (w/2) ln(1 + w^2/W^2) - w + W atan(w/W) ].
inline double xi0_resonance_closed(double W, double w) {
    const double a = std::fabs(w);
    const double v = (W * W / kPi) *
                     (0.5 * a * std::log1p(a * a / (W * W)) - a + W * std::atan(a / W));
    return w >= 0.0 ? v : -v;
}

/// Richardson-extrapolated first and second derivatives (4th order).
inline cplx fd_first(const std::function<cplx(double)>& f, double h) {
    return (8.0 * (f(h / 2) - f(-h / 2)) - (f(h) - f(-h))) / (6.0 * h);
}
inline cplx fd_second(const std::function<cplx(double)>& f, double h) {
    const cplx d2h = (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
    const cplx dh = (f(h / 2) - 2.0 * f(0.0) + f(-h / 2)) / (h * h / 4.0);
    return (4.0 * dh - d2h) / 3.0;
}

} // namespace oracle
