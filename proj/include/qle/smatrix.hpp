// smatrix.hpp — Frequency-dependent point-scatterer models (r, s) and their
// reality / unitarity / transparency / causality checks.
//
// All closed-form kinds satisfy r*(w) = r(-w), s*(w) = s(-w), |r|^2+|s|^2 = 1
// on the real axis, and are analytic for Im(w) > 0.

#pragma once

#include <variant>

#include "qle/spectrum.hpp"
#include "qle/winding.hpp"

namespace qle {

/// r = -1, s = 0 at every frequency. Violates transparency by construction.
struct PerfectReflector {};

/// Single-pole reflectivity with cutoff Omega:
///   r(w) = -i*Omega / (w + i*Omega),   s(w) = 1 + r(w) = w / (w + i*Omega).
struct ResonanceCutoff {
    double cutoff{1.0};
};

/// Reflection/transmission sampled on a symmetric grid. Real-axis, on-grid
/// evaluation only; no analytic continuation of sampled data.
struct TabulatedSMatrix {
    ComplexSpectrum reflection;
    ComplexSpectrum transmission;
};

using SMatrixModel = std::variant<PerfectReflector, ResonanceCutoff, TabulatedSMatrix>;

struct RS {
    cplx r, s;
};

/// (r, s) at a complex frequency. Tabulated kind throws
/// unsupported_continuation for any complex argument.
RS eval_rs(const SMatrixModel& model, cplx omega);

/// (r, s) at a real frequency. Tabulated kind requires omega on its grid.
RS eval_rs(const SMatrixModel& model, double omega);

/// (r, s) with linear interpolation for tabulated data; identical to eval_rs
/// for closed-form kinds. Used by the radiation-pressure quadratures.
RS rs_interp(const SMatrixModel& model, double omega);

/// r, s and their first two frequency derivatives (closed-form kinds only).
struct RSDerivs {
    cplx r, dr, d2r;
    cplx s, ds, d2s;
};
RSDerivs eval_rs_derivs(const SMatrixModel& model, double omega);

/// max over the grid of | |r|^2 + |s|^2 - 1 |.
double check_unitarity(const SMatrixModel& model, const FrequencyGrid& grid);

/// max hermitian residual of r and s sampled on the grid.
double reality_residual(const SMatrixModel& model, const FrequencyGrid& grid);

/// max |r(w)| over w in [band_factor*omega_c, 10*band_factor*omega_c].
/// Small values indicate transparency above the cutoff.
double check_transparency(const SMatrixModel& model, double omega_c,
                          double band_factor, int n_samples = 512);

/// Pole count of r and s inside a rectangle strictly in the upper half plane,
/// by the argument principle. Tabulated kind throws unsupported_continuation.
int check_causality(const SMatrixModel& model, const Rect& box);

bool is_tabulated(const SMatrixModel& model);

/// Frequency scale on which (r, s) vary: the cutoff for ResonanceCutoff, the
/// grid step for tabulated data, 0 for the featureless perfect reflector.
/// Quadratures use it to place breakpoints around localized structure.
double structure_scale(const SMatrixModel& model);

} // namespace qle
