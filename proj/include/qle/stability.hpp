// stability.hpp — Mechanical impedance/admittance, positive-real (passivity)
// testing, upper-half-plane pole search, and motion classification.
//
// Impedance in Laplace variables (f{p} = f[ip], Re p > 0):
//   Z{p} = friction + m p + K/p - c_al p^2
//          + (2p/pi) int_0^inf measure(k) / (p^2 + k^2) dk
// with measure(k) = xi(k)/k >= 0. The spectral term is positive-real by
// construction; passivity therefore reduces to sign conditions on
// m, K, friction, the measure, and the absence of the polynomial part.

#pragma once

#include <string>
#include <variant>
#include <vector>

#include "qle/dispersion.hpp"
#include "qle/spectrum.hpp"
#include "qle/system.hpp"
#include "qle/winding.hpp"

namespace qle {

struct NoMeasure {};
struct ConstantMeasure {
    double value{0.0}; // xi(k)/k = const, e.g. D/T for the Brownian kernel
};
struct SampledMeasure {
    Eigen::ArrayXd k;     // uniform grid on [0, k_max]
    Eigen::ArrayXd value; // xi(k)/k samples
    TailFit tail;         // power-law extension beyond k_max
};
using SpectralMeasure = std::variant<NoMeasure, ConstantMeasure, SampledMeasure>;

struct ImpedanceModel {
    double m{1.0};        // high-frequency mass (any sign)
    double K{0.0};        // spring
    double friction{0.0}; // xi'(0)
    double al_coeff{0.0}; // polynomial part: +al_coeff * w^2 in Z[w]
    SpectralMeasure measure{NoMeasure{}};

    // derived bookkeeping, filled by impedance_model_from where applicable
    double mu_0{0.0};
    double mu_T{0.0};
};

double measure_min(const SpectralMeasure& m);

/// Z{p} for Re p > 0; throws std::domain_error otherwise.
cplx impedance(const ImpedanceModel& model, cplx p);

/// Y{p} = 1/Z{p}; a zero of Z simply maps to an infinite value.
cplx admittance(const ImpedanceModel& model, cplx p);

/// Z as a function of complex frequency w with Im(w) > 0 (Z[w] = Z{-iw}),
/// plus the real-axis boundary values where the formula stays finite.
cplx impedance_omega(const ImpedanceModel& model, cplx omega);

struct PassivityReport {
    bool passes{false};
    bool structural_ok{false};
    double min_re_Z{0.0};
    cplx argmin{0.0, 0.0};
};

/// Structural sign test plus numerical corroboration: min Re Z over a sampled
/// box Re p in [eps, P], |Im p| <= P.
PassivityReport passivity_test(const ImpedanceModel& model, double eps, double P,
                               int n_re = 24, int n_im = 41);

struct AdmittancePole {
    cplx location;
    cplx residue; // of Y at the pole (1/Z' for a simple zero of Z)
    double abs_Z;
};

/// Zeros of Z (= poles of Y) inside a rectangle strictly above the real
/// frequency axis: argument principle with recursive bisection, then local
/// Newton refinement to |Z| < 1e-10 * scale.
std::vector<AdmittancePole> find_upper_half_poles(const ImpedanceModel& model,
                                                  const Rect& box);

enum class MotionClass { stable_causal, runaway, noncausal_preacceleration };

struct ClassificationReport {
    MotionClass cls{MotionClass::stable_causal};
    PassivityReport passivity;
    std::vector<AdmittancePole> poles;
    Rect searched_box{};
    // a runaway kernel is the same failure seen with the opposite boundary
    // condition; the label travels with the runaway classification
    bool preacceleration_variant{false};
};

ClassificationReport classify_motion(const ImpedanceModel& model);

const char* to_string(MotionClass c);

/// Options for building an impedance model from a mechanical system
/// (scatterer measures are sampled on a k-grid and tail-fitted).
struct ImpedanceBuildOptions {
    double k_max{0.0}; // 0: auto from model scales
    int n_k{2000};
    double rel_tol{1e-8};
};

ImpedanceModel impedance_model_from(const MechanicalSystem& sys,
                                    const ImpedanceBuildOptions& opt = {});

/// JSON text of a classification report:
/// {class, min_re_Z, poles:[{re,im,abs_Z}], structural:{m,K,friction,measure_min}}
std::string classification_to_json(const ClassificationReport& rep,
                                   const ImpedanceModel& model);

} // namespace qle
