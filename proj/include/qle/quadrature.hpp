// quadrature.hpp — Adaptive Gauss-Kronrod (G7,K15) integration for real and
// complex integrands, plus semi-infinite integration by interval doubling
// with geometric tail extrapolation.

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "qle/errors.hpp"

namespace qle {

struct QuadOptions {
    double rel_tol{1e-10};
    double abs_tol{0.0};
    int max_intervals{20000};
};

namespace detail {

// Kronrod-15 abscissae with Gauss-7 and Kronrod-15 weights.
inline constexpr double gk_nodes[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0,               0.204432940075298},
    {0.586087235467691, 0.0,               0.169004726639267},
    {0.864864423359769, 0.0,               0.104790010322250},
    {0.991455371120813, 0.0,               0.022935322010529},
};

template <class T>
double norm_of(const T& v) {
    if constexpr (std::is_same_v<T, std::complex<double>>) return std::abs(v);
    else return std::fabs(v);
}

template <class F, class T>
T gk15(const F& f, double a, double b, double& err) {
    const double mid = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    T y0 = f(mid);
    T g7 = gk_nodes[0][1] * y0;
    T k15 = gk_nodes[0][2] * y0;
    for (int i = 1; i < 8; ++i) {
        const double dx = h * gk_nodes[i][0];
        T yi = f(mid + dx) + f(mid - dx);
        g7 += gk_nodes[i][1] * yi;
        k15 += gk_nodes[i][2] * yi;
    }
    g7 *= h;
    k15 *= h;
    err = 200.0 * norm_of<T>(k15 - g7);
    err *= std::sqrt(err);
    return k15;
}

} // namespace detail

/// Adaptive integral of f over [a, b]; a > b integrates with sign flip.
/// Worklist subdivision until every interval meets the tolerance.
template <class F>
auto integrate(const F& f, double a, double b, const QuadOptions& opt = {})
    -> decltype(f(a)) {
    using T = decltype(f(a));
    if (a == b) return T{};
    double sign = 1.0;
    if (a > b) { std::swap(a, b); sign = -1.0; }

    struct Interval { double a, b, err; T val; };
    std::vector<Interval> work;
    double e0;
    T v0 = detail::gk15<F, T>(f, a, b, e0);
    work.push_back({a, b, e0, v0});

    T total = v0;
    double total_err = e0;
    int splits = 0;
    while (total_err > std::max(opt.abs_tol, opt.rel_tol * detail::norm_of<T>(total))) {
        if (++splits > opt.max_intervals)
            throw std::runtime_error("integrate: interval budget exhausted");
        // split the interval with the largest error estimate
        std::size_t iw = 0;
        for (std::size_t i = 1; i < work.size(); ++i)
            if (work[i].err > work[iw].err) iw = i;
        Interval cur = work[iw];
        const double mid = 0.5 * (cur.a + cur.b);
        if (mid <= cur.a || mid >= cur.b) break; // step underflow
        double e1, e2;
        T v1 = detail::gk15<F, T>(f, cur.a, mid, e1);
        T v2 = detail::gk15<F, T>(f, mid, cur.b, e2);
        total += v1 + v2 - cur.val;
        total_err += e1 + e2 - cur.err;
        work[iw] = {cur.a, mid, e1, v1};
        work.push_back({mid, cur.b, e2, v2});
    }
    return sign * total;
}

/// Integral of f over [a, +inf). Integrates doubling blocks [X, 2X] until the
/// block contribution is negligible, then adds a geometric tail estimate.
/// Throws divergence_error when block contributions fail to decay.
template <class F>
auto integrate_to_infinity(const F& f, double a, double first_width,
                           const QuadOptions& opt = {}) -> decltype(f(a)) {
    using T = decltype(f(a));
    if (!(first_width > 0.0))
        throw std::invalid_argument("integrate_to_infinity: first_width must be > 0");
    T total = integrate(f, a, a + first_width, opt);
    double x = a + first_width;
    double prev = -1.0;
    double ratio = 0.0;
    T last{};
    const int max_blocks = 60;
    for (int block = 0; block < max_blocks; ++block) {
        const double x2 = 2.0 * x - a;
        // later blocks only need to resolve their share of the total
        QuadOptions local = opt;
        local.abs_tol = std::max(opt.abs_tol,
                                 opt.rel_tol * detail::norm_of<T>(total) / 16.0);
        last = integrate(f, x, x2, local);
        total += last;
        const double mag = detail::norm_of<T>(last);
        const double scale = std::max(detail::norm_of<T>(total), opt.abs_tol);
        if (prev >= 0.0) {
            ratio = (prev > 0.0) ? mag / prev : 0.0;
            if (block >= 3 && ratio > 0.95)
                throw divergence_error("integrate_to_infinity: tail fails to decay");
        }
        prev = mag;
        x = x2;
        if (mag <= std::max(opt.abs_tol, 0.5 * opt.rel_tol * scale)) {
            // geometric extrapolation of the remaining tail
            if (ratio > 0.0 && ratio < 0.9)
                total += last * (ratio / (1.0 - ratio));
            return total;
        }
    }
    throw divergence_error("integrate_to_infinity: no convergence after doubling blocks");
}

} // namespace qle
