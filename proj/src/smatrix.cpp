#include "qle/smatrix.hpp"

#include <cmath>
#include <stdexcept>

#include "qle/errors.hpp"

namespace qle {

namespace {

cplx tabulated_lookup(const ComplexSpectrum& s, double omega) {
    const auto& g = s.grid;
    const double x = omega / g.delta + g.half_count;
    const double xr = std::round(x);
    if (xr < 0 || xr >= g.size() || std::fabs(x - xr) > 1e-9)
        throw std::invalid_argument("tabulated S-matrix: frequency not on the grid");
    return s.values[static_cast<int>(xr)];
}

} // namespace

RS eval_rs(const SMatrixModel& model, cplx omega) {
    return std::visit(
        [&](const auto& m) -> RS {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, PerfectReflector>) {
                (void)omega;
                return {cplx(-1.0, 0.0), cplx(0.0, 0.0)};
            } else if constexpr (std::is_same_v<M, ResonanceCutoff>) {
                const cplx den = omega + cplx(0.0, m.cutoff);
                return {cplx(0.0, -m.cutoff) / den, omega / den};
            } else {
                if (omega.imag() != 0.0)
                    throw unsupported_continuation(
                        "tabulated S-matrix cannot be continued off the real axis");
                return {tabulated_lookup(m.reflection, omega.real()),
                        tabulated_lookup(m.transmission, omega.real())};
            }
        },
        model);
}

RS eval_rs(const SMatrixModel& model, double omega) {
    return eval_rs(model, cplx(omega, 0.0));
}

RS rs_interp(const SMatrixModel& model, double omega) {
    if (const auto* t = std::get_if<TabulatedSMatrix>(&model))
        return {interp_spectrum(t->reflection, omega), interp_spectrum(t->transmission, omega)};
    return eval_rs(model, omega);
}

RSDerivs eval_rs_derivs(const SMatrixModel& model, double omega) {
    return std::visit(
        [&](const auto& m) -> RSDerivs {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, PerfectReflector>) {
                (void)omega;
                return {cplx(-1.0, 0.0), 0.0, 0.0, 0.0, 0.0, 0.0};
            } else if constexpr (std::is_same_v<M, ResonanceCutoff>) {
                const cplx den = cplx(omega, m.cutoff);
                const cplx r = cplx(0.0, -m.cutoff) / den;
                const cplx dr = cplx(0.0, m.cutoff) / (den * den);
                const cplx d2r = cplx(0.0, -2.0 * m.cutoff) / (den * den * den);
                // s = 1 + r for this family
                return {r, dr, d2r, 1.0 + r, dr, d2r};
            } else {
                throw unsupported_continuation(
                    "tabulated S-matrix has no off-grid derivatives");
            }
        },
        model);
}

double check_unitarity(const SMatrixModel& model, const FrequencyGrid& grid) {
    double worst = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
        const RS rs = eval_rs(model, grid.omega(i));
        worst = std::max(worst, std::fabs(std::norm(rs.r) + std::norm(rs.s) - 1.0));
    }
    return worst;
}

double reality_residual(const SMatrixModel& model, const FrequencyGrid& grid) {
    ComplexSpectrum r, s;
    r.grid = s.grid = grid;
    r.values.resize(grid.size());
    s.values.resize(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
        const RS rs = eval_rs(model, grid.omega(i));
        r.values[i] = rs.r;
        s.values[i] = rs.s;
    }
    return std::max(hermitian_residual(r), hermitian_residual(s));
}

double check_transparency(const SMatrixModel& model, double omega_c,
                          double band_factor, int n_samples) {
    if (!(omega_c > 0.0))
        throw std::invalid_argument("check_transparency: omega_c must be > 0");
    if (!(band_factor >= 1.0))
        throw std::invalid_argument("check_transparency: band_factor must be >= 1");
    const double lo = band_factor * omega_c;
    const double hi = 10.0 * band_factor * omega_c;
    double worst = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        const double w = lo + (hi - lo) * i / (n_samples - 1);
        worst = std::max(worst, std::abs(rs_interp(model, w).r));
    }
    return worst;
}

int check_causality(const SMatrixModel& model, const Rect& box) {
    if (std::holds_alternative<TabulatedSMatrix>(model))
        throw unsupported_continuation("causality check needs a closed-form model");
    if (!(box.im_min > 0.0))
        throw std::invalid_argument("check_causality: box must lie strictly in Im(w) > 0");
    if (std::holds_alternative<PerfectReflector>(model)) return 0; // constants
    auto rf = [&](cplx z) { return eval_rs(model, z).r; };
    auto sf = [&](cplx z) { return eval_rs(model, z).s; };
    return count_poles(rf, box) + count_poles(sf, box);
}

bool is_tabulated(const SMatrixModel& model) {
    return std::holds_alternative<TabulatedSMatrix>(model);
}

double structure_scale(const SMatrixModel& model) {
    return std::visit(
        [](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, PerfectReflector>) return 0.0;
            else if constexpr (std::is_same_v<M, ResonanceCutoff>) return m.cutoff;
            else return m.reflection.grid.delta;
        },
        model);
}

} // namespace qle
