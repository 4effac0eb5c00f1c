#include "qle/linear_coupling.hpp"

#include <cmath>
#include <stdexcept>

#include "qle/errors.hpp"
#include "qle/quadrature.hpp"

namespace qle {

namespace {

constexpr double kPi = 3.14159265358979323846;

// PV int_0^inf g(k) / (a^2 - k^2) dk for a > 0 and decaying g:
// singularity subtracted on [0, 2a], analytic log term, plain tail beyond.
template <class G>
double pv_over_resonance(const G& g, double a, const QuadOptions& opt) {
    const double ga = g(a);
    auto sub = [&](double k) {
        const double d = a * a - k * k;
        if (std::fabs(a - k) < 1e-14 * a) {
            // removable point: -(g'(a)) / (2a) via symmetric difference
            const double h = 1e-6 * a;
            return -(g(a + h) - g(a - h)) / (2.0 * h) / (2.0 * a);
        }
        return (g(k) - ga) / d;
    };
    double val = integrate(sub, 0.0, a, opt) + integrate(sub, a, 2.0 * a, opt);
    // PV int_0^{2a} dk/(a^2-k^2) = ln(3)/(2a)
    val += ga * std::log(3.0) / (2.0 * a);
    auto tail = [&](double k) { return g(k) / (a * a - k * k); };
    val += integrate_to_infinity(tail, 2.0 * a, 2.0 * a, opt);
    return val;
}

} // namespace

double regulator_value(const Regulator& reg, double k) {
    const double a = std::fabs(k);
    return std::visit(
        [&](const auto& r) -> double {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, ModelFormFactor>) {
                const double w2 = r.cutoff * r.cutoff;
                const double f = w2 / (w2 + a * a);
                return f * f;
            } else if constexpr (std::is_same_v<R, TabulatedRegulator>) {
                const auto& ks = r.k;
                const int n = static_cast<int>(ks.size());
                if (n == 0 || a > ks[n - 1]) return 0.0;
                // uniform or monotone table, binary search
                int lo = 0, hi = n - 1;
                while (hi - lo > 1) {
                    const int mid = (lo + hi) / 2;
                    (ks[mid] <= a ? lo : hi) = mid;
                }
                if (n == 1) return r.value[0];
                const double t = (a - ks[lo]) / (ks[hi] - ks[lo]);
                return (1.0 - t) * r.value[lo] + t * r.value[hi];
            } else {
                return r.fn(a);
            }
        },
        reg);
}

double charge_force_commutator(const LinearCoupling& c, double omega) {
    return (2.0 / 3.0) * c.charge_squared * omega * omega * omega *
           regulator_value(c.regulator, omega);
}

cplx charge_susceptibility(const LinearCoupling& c, cplx omega, double rel_tol) {
    if (omega.imag() < 0.0)
        throw std::domain_error("charge_susceptibility: retarded function, Im(omega) >= 0");
    if (omega == cplx(0.0, 0.0)) return {0.0, 0.0};

    if (const auto* m = std::get_if<ModelFormFactor>(&c.regulator)) {
        const double W = m->cutoff;
        const cplx d = omega + cplx(0.0, W);
        return -(c.charge_squared / 3.0) * W * W * W * omega * omega / (d * d);
    }

    QuadOptions opt;
    opt.rel_tol = rel_tol;
    auto xi = [&](double k) { return charge_force_commutator(c, k); };

    if (omega.imag() > 0.0) {
        // chi(w) = -(2/pi) w^2 int_0^inf xi(k) / (k (w^2 - k^2)) dk, no pole
        const cplx w2 = omega * omega;
        auto f = [&](double k) -> cplx { return xi(k) / (k * (w2 - k * k)); };
        const double start = std::max(1.0, std::abs(omega));
        const cplx head = integrate(f, 0.0, 2.0 * start, opt);
        const cplx tail = integrate_to_infinity(f, 2.0 * start, 2.0 * start, opt);
        return -(2.0 / kPi) * w2 * (head + tail);
    }

    const double w = omega.real();
    const double a = std::fabs(w);
    auto g = [&](double k) { return k <= 0.0 ? 0.0 : xi(k) / k; };
    const double pv = pv_over_resonance(g, a, opt);
    return cplx(-(2.0 / kPi) * w * w * pv, xi(w));
}

double induced_mass_charge(const LinearCoupling& c, double rel_tol) {
    QuadOptions opt;
    opt.rel_tol = rel_tol;
    auto f = [&](double k) { return regulator_value(c.regulator, k); };
    double scale = 1.0;
    if (const auto* m = std::get_if<ModelFormFactor>(&c.regulator)) scale = m->cutoff;
    const double integral = integrate_to_infinity(f, 0.0, 4.0 * scale, opt);
    return (4.0 * c.charge_squared / (3.0 * kPi)) * integral;
}

double generic_force_commutator(const CouplingTable& table, double omega) {
    if (omega == 0.0) return 0.0;
    const cplx num = table.e(omega, omega) * table.e(-omega, -omega) +
                     table.e(omega, -omega) * table.e(-omega, omega);
    return num.real() / (4.0 * omega);
}

cplx generic_linear_susceptibility(const CouplingTable& table, double omega,
                                   double rel_tol) {
    // reality spot-check: conj(e(w,k)) = e(-w,-k)
    double scale = 0.0, worst = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double w = (0.1 + 0.27 * i) * (i % 2 ? -1.0 : 1.0);
        const double k = table.k_max * (0.05 + 0.12 * i);
        const cplx a = table.e(w, k), b = table.e(-w, -k);
        scale = std::max(scale, std::abs(a));
        worst = std::max(worst, std::abs(std::conj(a) - b));
    }
    if (worst > 1e-9 * std::max(scale, 1.0))
        throw std::invalid_argument("generic_linear_susceptibility: coupling reality violated");

    QuadOptions opt;
    opt.rel_tol = rel_tol;
    auto even_part = [&](double k) {
        const cplx v = table.e(omega, k) * table.e(-omega, -k) +
                       table.e(omega, -k) * table.e(-omega, k);
        return v.real();
    };
    const double a = std::fabs(omega);
    double pv;
    if (omega == 0.0 || a >= table.k_max) {
        auto f = [&](double k) { return even_part(k) / (omega * omega - k * k); };
        pv = integrate(f, 0.0, table.k_max, opt);
    } else {
        const double ga = even_part(a);
        auto sub = [&](double k) {
            if (std::fabs(k - a) < 1e-14 * std::max(a, 1.0)) {
                const double h = 1e-6 * std::max(a, 1.0);
                return -(even_part(a + h) - even_part(a - h)) / (2.0 * h) / (2.0 * a);
            }
            return (even_part(k) - ga) / (a * a - k * k);
        };
        pv = integrate(sub, 0.0, a, opt) + integrate(sub, a, std::min(2.0 * a, table.k_max), opt);
        if (2.0 * a < table.k_max) {
            auto plain = [&](double k) { return even_part(k) / (a * a - k * k); };
            pv += integrate(plain, 2.0 * a, table.k_max, opt);
            pv += ga * std::log(3.0) / (2.0 * a);
        } else {
            // analytic PV of the subtracted constant on [0, k_max]
            pv += ga / (2.0 * a) * std::log((table.k_max + a) / (table.k_max - a));
        }
    }
    return cplx(-pv / (2.0 * kPi), generic_force_commutator(table, omega));
}

} // namespace qle
