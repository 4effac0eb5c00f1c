#include "qle/dispersion.hpp"

#include <cmath>
#include <stdexcept>

#include "qle/errors.hpp"
#include "qle/quadrature.hpp"

namespace qle {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Fit {
    double amplitude{0.0};
    double exponent{0.0};
    bool valid{false};
};

// Least-squares fit log|y| = log A + q log k over the last decade of (k, y).
Fit fit_tail(const Eigen::ArrayXd& k, const Eigen::ArrayXd& y) {
    const int n = static_cast<int>(k.size());
    if (n < 4) return {};
    const double kmax = k[n - 1];
    const double kmin = kmax / 10.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    double ylast = 0.0;
    double ymax = y.abs().maxCoeff();
    for (int i = 0; i < n; ++i) {
        if (k[i] < kmin || k[i] <= 0.0) continue;
        const double a = std::fabs(y[i]);
        if (a < 1e-14 * ymax) continue;
        const double lx = std::log(k[i]);
        const double ly = std::log(a);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        ++m;
        ylast = y[i];
    }
    if (m < 4) return {};
    const double det = m * sxx - sx * sx;
    if (std::fabs(det) < 1e-30) return {};
    const double q = (m * sxy - sx * sy) / det;
    const double logA = (sy * sxx - sx * sxy) / det;
    const double sign = ylast >= 0.0 ? 1.0 : -1.0;
    return {sign * std::exp(logA), q, true};
}

void require_real_odd(const ComplexSpectrum& xi) {
    const double scale = std::max(xi.values.abs().maxCoeff(), 1e-300);
    double im = 0.0, odd = 0.0;
    for (int i = 0; i < xi.size(); ++i) {
        im = std::max(im, std::fabs(xi.values[i].imag()));
        odd = std::max(odd, std::abs(xi.values[i] + xi.values[xi.grid.reflect(i)]));
    }
    if (im > 1e-9 * scale)
        throw std::invalid_argument("dispersion: xi must be real");
    if (odd > 1e-8 * scale)
        throw std::invalid_argument("dispersion: xi must be odd");
}

// Samples g_j = xi~(w_j)/w_j^n with the removable point at w = 0 filled by
// parity-consistent extrapolation.
Eigen::ArrayXd build_g(const ComplexSpectrum& xi, int n, double slope) {
    const int N = xi.size();
    const int z = xi.grid.zero_index();
    Eigen::ArrayXd g(N);
    for (int j = 0; j < N; ++j) {
        const double w = xi.grid.omega(j);
        const double xt = xi.values[j].real() - (n >= 2 ? slope * w : 0.0);
        g[j] = (j == z) ? 0.0 : xt / std::pow(w, n);
    }
    if (n == 1) {
        g[z] = (xi.values[z + 1].real() - xi.values[z - 1].real()) / (2.0 * xi.grid.delta);
    } else if (n == 3 && z >= 2) {
        g[z] = (4.0 * 0.5 * (g[z + 1] + g[z - 1]) - 0.5 * (g[z + 2] + g[z - 2])) / 3.0;
    } // n = 0, 2: g(0) = 0
    return g;
}

// Tail of int_{|w'|>W} g(w')/(w'-w) dw' for power-law g beyond the grid,
// folded by the parity of g (odd for even n, even for odd n).
template <class T>
T tail_integral(const Fit& fit, int n, double W, T omega, const QuadOptions& opt) {
    if (!fit.valid) return T{};
    const bool g_odd = (n % 2 == 0);
    auto f = [&](double t) -> T {
        const double wp = W / t;
        const double gv = fit.amplitude * std::pow(wp, fit.exponent - n);
        const T kern = g_odd
            ? T(1.0) / (wp - omega) + T(1.0) / (wp + omega)
            : T(1.0) / (wp - omega) - T(1.0) / (wp + omega);
        return gv * kern * (W / (t * t));
    };
    return integrate(f, 0.0, 1.0, opt);
}

void check_tail_decay(const Fit& fit, int n) {
    if (!fit.valid) return; // decayed below floor: treated as zero tail
    const bool g_odd = (n % 2 == 0);
    const double limit = g_odd ? n : n + 1;
    if (fit.exponent >= limit - 1e-9)
        throw divergence_error("kk_transform: xi/w^n tail decays too slowly");
}

} // namespace

TailFit fit_power_law_tail(const ComplexSpectrum& xi) {
    const int N = xi.size();
    const int z = xi.grid.zero_index();
    Eigen::ArrayXd k(N - z - 1), y(N - z - 1);
    for (int j = z + 1; j < N; ++j) {
        k[j - z - 1] = xi.grid.omega(j);
        y[j - z - 1] = xi.values[j].real();
    }
    const Fit f = fit_tail(k, y);
    return {f.amplitude, f.exponent, f.valid};
}

TailFit fit_power_law(const Eigen::ArrayXd& k, const Eigen::ArrayXd& y) {
    const Fit f = fit_tail(k, y);
    return {f.amplitude, f.exponent, f.valid};
}

ComplexSpectrum kk_transform(const ComplexSpectrum& xi, int subtractions,
                             const std::vector<cplx>& taylor_coeffs) {
    if (subtractions < 0 || subtractions > 3)
        throw std::invalid_argument("kk_transform: subtractions must be in {0,1,2,3}");
    const int need = std::max(0, subtractions - 1);
    if (static_cast<int>(taylor_coeffs.size()) != need)
        throw std::invalid_argument("kk_transform: need n-1 Taylor coefficients");
    require_real_odd(xi);

    const int n = subtractions;
    const double slope = (n >= 2) ? taylor_coeffs[0].imag() : 0.0;
    const Eigen::ArrayXd g = build_g(xi, n, slope);
    const int N = xi.size();
    const double d = xi.grid.delta;
    const double W = xi.grid.max_omega();

    const TailFit tf = fit_power_law_tail(xi);
    const Fit fit{tf.amplitude, tf.exponent, tf.valid};
    check_tail_decay(fit, n);

    QuadOptions opt;
    opt.rel_tol = 1e-9;

    ComplexSpectrum chi;
    chi.grid = xi.grid;
    chi.values.resize(N);
    for (int i = 1; i < N - 1; ++i) {
        const double w = xi.grid.omega(i);
        // principal value on the grid: subtract-the-singularity trapezoid
        double s = 0.0;
        for (int j = 0; j < N; ++j) {
            const double wt = (j == 0 || j == N - 1) ? 0.5 : 1.0;
            if (j == i) {
                const double gp = (i > 0 && i < N - 1)
                    ? (g[i + 1] - g[i - 1]) / (2.0 * d)
                    : 0.0;
                s += wt * gp * d;
            } else {
                s += wt * (g[j] - g[i]) / (xi.grid.omega(j) - w) * d;
            }
        }
        s += g[i] * std::log((W - w) / (W + w));
        const double tail = tail_integral(fit, n, W, w, opt);

        cplx poly(0.0, 0.0);
        double wp = w;
        for (int j = 0; j < need; ++j) {
            poly += taylor_coeffs[j] * wp;
            wp *= w;
        }
        const double wn = std::pow(w, n);
        const double xt = xi.values[i].real() - (n >= 2 ? slope * w : 0.0);
        chi.values[i] = poly + wn / kPi * (s + tail) + cplx(0.0, xt);
    }
    // the principal value is one-sided at the two extreme grid points:
    // fill them by quadratic extrapolation (callers keep the band of
    // interest well inside the grid)
    chi.values[0] = 3.0 * chi.values[1] - 3.0 * chi.values[2] + chi.values[3];
    chi.values[N - 1] = 3.0 * chi.values[N - 2] - 3.0 * chi.values[N - 3] + chi.values[N - 4];
    chi.hermitian = true;
    return chi;
}

cplx kk_eval_upper(const ComplexSpectrum& xi, int subtractions,
                   const std::vector<cplx>& taylor_coeffs, cplx omega) {
    if (!(omega.imag() > 0.0))
        throw std::domain_error("kk_eval_upper: requires Im(omega) > 0");
    const int n = subtractions;
    const int need = std::max(0, n - 1);
    if (static_cast<int>(taylor_coeffs.size()) != need)
        throw std::invalid_argument("kk_eval_upper: need n-1 Taylor coefficients");
    require_real_odd(xi);

    const double slope = (n >= 2) ? taylor_coeffs[0].imag() : 0.0;
    const Eigen::ArrayXd g = build_g(xi, n, slope);
    const int N = xi.size();
    const double d = xi.grid.delta;
    const double W = xi.grid.max_omega();
    const TailFit tf = fit_power_law_tail(xi);
    const Fit fit{tf.amplitude, tf.exponent, tf.valid};
    check_tail_decay(fit, n);

    QuadOptions opt;
    opt.rel_tol = 1e-9;

    cplx s(0.0, 0.0);
    for (int j = 0; j < N; ++j) {
        const double wt = (j == 0 || j == N - 1) ? 0.5 : 1.0;
        s += wt * g[j] / (xi.grid.omega(j) - omega) * d;
    }
    s += tail_integral(fit, n, W, omega, opt);

    cplx poly(0.0, 0.0);
    cplx wp = omega;
    for (int j = 0; j < need; ++j) {
        poly += taylor_coeffs[j] * wp;
        wp *= omega;
    }
    cplx wn(1.0, 0.0);
    for (int j = 0; j < n; ++j) wn *= omega;
    return poly + wn / kPi * s;
}

double fdt_residual(const ComplexSpectrum& chi, const ComplexSpectrum& xi) {
    if (!(chi.grid == xi.grid))
        throw std::invalid_argument("fdt_residual: grid mismatch");
    const double scale = std::max(xi.values.abs().maxCoeff(), 1e-300);
    double worst = 0.0;
    for (int i = 0; i < xi.size(); ++i)
        worst = std::max(worst, std::fabs(chi.values[i].imag() - xi.values[i].real()));
    return worst / scale;
}

double detailed_balance_residual(const ComplexSpectrum& c_ff,
                                 const ComplexSpectrum& xi, double temperature) {
    if (!(c_ff.grid == xi.grid))
        throw std::invalid_argument("detailed_balance_residual: grid mismatch");
    if (temperature == 0.0) {
        // vacuum path: C_FF must vanish at negative frequencies
        const double scale = std::max(c_ff.values.abs().maxCoeff(), 1e-300);
        double worst = 0.0;
        for (int i = 0; i < c_ff.grid.zero_index(); ++i)
            worst = std::max(worst, std::abs(c_ff.values[i]));
        return worst / scale;
    }
    double scale = 0.0, worst = 0.0;
    for (int i = 0; i < xi.size(); ++i)
        scale = std::max(scale, 2.0 * std::fabs(xi.values[i].real()));
    scale = std::max(scale, 1e-300);
    for (int i = 0; i < xi.size(); ++i) {
        const double w = xi.grid.omega(i);
        if (-w / temperature > 650.0) {
            // the true C_FF underflows double precision here; the meaningful
            // statement is that the computed value is consistent with zero
            worst = std::max(worst, std::abs(c_ff.values[i]));
            continue;
        }
        const double lhs = -std::expm1(-w / temperature) * c_ff.values[i].real();
        worst = std::max(worst, std::fabs(lhs - 2.0 * xi.values[i].real()));
    }
    return worst / scale;
}

InducedMass induced_mass_vacuum(const ComplexSpectrum& xi0) {
    require_real_odd(xi0);
    const int N = xi0.size();
    const int z = xi0.grid.zero_index();
    const int M = N - z; // samples at w >= 0
    if (M < 8) throw std::invalid_argument("induced_mass_vacuum: grid too small");
    Eigen::ArrayXd k(M), gv(M);
    for (int j = 0; j < M; ++j) {
        k[j] = xi0.grid.omega(z + j);
        gv[j] = (j == 0) ? 0.0 : xi0.values[z + j].real() / (k[j] * k[j] * k[j]);
    }
    gv[0] = (4.0 * gv[1] - gv[2]) / 3.0; // even extrapolation to k = 0

    const Fit fit = fit_tail(k, gv * k * k * k); // fit on xi itself
    if (fit.valid && fit.exponent >= 2.0 - 1e-9)
        throw divergence_error("induced_mass_vacuum: xi_0/k^3 tail not integrable "
                               "(infinite quasistatic mass)");
    double grid_part = 0.0;
    for (int j = 0; j + 1 < M; ++j)
        grid_part += 0.5 * (gv[j] + gv[j + 1]) * (k[j + 1] - k[j]);

    double tail_part = 0.0;
    if (fit.valid) {
        const double W = k[M - 1];
        tail_part = fit.amplitude * std::pow(W, fit.exponent - 2.0) / (2.0 - fit.exponent);
    }
    const double c = 2.0 / kPi;
    return {c * (grid_part + tail_part), c * grid_part, c * tail_part};
}

ThermalMass induced_mass_thermal(const ComplexSpectrum& xi_T,
                                 const ComplexSpectrum& xi_0, double friction) {
    if (!(xi_T.grid == xi_0.grid))
        throw std::invalid_argument("induced_mass_thermal: grid mismatch");
    const InducedMass m0 = induced_mass_vacuum(xi_0);

    const int N = xi_T.size();
    const int z = xi_T.grid.zero_index();
    const int M = N - z;
    Eigen::ArrayXd k(M), dv(M);
    for (int j = 0; j < M; ++j) {
        k[j] = xi_T.grid.omega(z + j);
        if (j == 0) { dv[j] = 0.0; continue; }
        const double num = xi_T.values[z + j].real() - xi_0.values[z + j].real() -
                           friction * k[j];
        dv[j] = num / (k[j] * k[j] * k[j]);
    }
    dv[0] = (4.0 * dv[1] - dv[2]) / 3.0;

    double grid_part = 0.0;
    for (int j = 0; j + 1 < M; ++j)
        grid_part += 0.5 * (dv[j] + dv[j + 1]) * (k[j + 1] - k[j]);

    // the difference integrand decays like 1/k^2: fit and extend
    const Fit fit = fit_tail(k, dv);
    double tail_part = 0.0;
    if (fit.valid && fit.exponent < -1.0 - 1e-9) {
        const double W = k[M - 1];
        tail_part = -fit.amplitude * std::pow(W, fit.exponent + 1.0) / (fit.exponent + 1.0);
    }
    const double shift = 2.0 / kPi * (grid_part + tail_part);
    return {m0.value + shift, m0.value, shift};
}

namespace {

// 2/pi int_0^inf g with g even and finite at 0; the [0, k0] cell is closed
// with g(k0)*k0 (error O(k0^3) since g'(0) = 0), avoiding the 0/0 noise of
// cancelling numerators at tiny k.
double mass_integral(const std::function<double(double)>& g, double k_scale,
                     const QuadOptions& opt) {
    const double k0 = 1e-3 * k_scale;
    const double head = g(k0) * k0 + integrate(g, k0, 2.0 * k_scale, opt);
    const double tail = integrate_to_infinity(g, 2.0 * k_scale, 2.0 * k_scale, opt);
    return 2.0 / kPi * (head + tail);
}

} // namespace

double induced_mass_vacuum_fn(const std::function<double(double)>& xi0,
                              double k_scale, double rel_tol) {
    QuadOptions opt;
    opt.rel_tol = rel_tol;
    auto g = [&](double k) { return xi0(k) / (k * k * k); };
    return mass_integral(g, k_scale, opt);
}

double thermal_mass_shift_fn(const std::function<double(double)>& xi_thermal,
                             double friction, double k_scale, double rel_tol) {
    QuadOptions opt;
    opt.rel_tol = rel_tol;
    auto g = [&](double k) { return (xi_thermal(k) - friction * k) / (k * k * k); };
    return mass_integral(g, k_scale, opt);
}

} // namespace qle
