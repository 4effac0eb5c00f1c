// winding.hpp — Argument-principle counting on rectangular contours.
//
// The winding number of f along the boundary equals (#zeros - #poles) inside,
// counted with multiplicity. Edges are sampled adaptively until consecutive
// phase increments are unambiguous and the total stabilizes to an integer.

#pragma once

#include <cmath>
#include <complex>
#include <functional>

#include "qle/errors.hpp"

namespace qle {

struct Rect {
    double re_min, re_max, im_min, im_max;

    std::complex<double> corner(int i) const {
        switch (i & 3) {
            case 0: return {re_min, im_min};
            case 1: return {re_max, im_min};
            case 2: return {re_max, im_max};
            default: return {re_min, im_max};
        }
    }
    double width() const { return re_max - re_min; }
    double height() const { return im_max - im_min; }
    bool contains(std::complex<double> z) const {
        return z.real() >= re_min && z.real() <= re_max &&
               z.imag() >= im_min && z.imag() <= im_max;
    }
};

using ComplexFn = std::function<std::complex<double>(std::complex<double>)>;

/// Accumulated phase change of f along the segment [z0, z1] / 2pi.
/// Bisects recursively while the phase step between samples exceeds pi/2.
double phase_change(const ComplexFn& f, std::complex<double> z0,
                    std::complex<double> z1, int max_depth = 48);

/// Winding number of f around the rectangle boundary, counterclockwise.
/// Throws contour_error when the result is not an integer within tol.
int winding_number(const ComplexFn& f, const Rect& box, double tol = 1e-3);

/// Number of poles of f inside the box assuming f has no zeros there that
/// are not matched by the model family in use: count = max(0, -winding).
int count_poles(const ComplexFn& f, const Rect& box, double tol = 1e-3);

} // namespace qle
