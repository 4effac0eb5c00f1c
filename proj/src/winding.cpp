#include "qle/winding.hpp"

#include <cmath>

namespace qle {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double phase_change(const ComplexFn& f, std::complex<double> z0,
                    std::complex<double> z1, int max_depth) {
    struct Walker {
        const ComplexFn& f;
        int limit;
        double run(std::complex<double> a, std::complex<double> b,
                   std::complex<double> fa, std::complex<double> fb, int depth) {
            const double eps = 1e-300;
            if (std::abs(fa) < eps || std::abs(fb) < eps)
                throw contour_error("phase_change: contour passes through a zero");
            const double d = std::arg(fb / fa);
            if (std::fabs(d) < 0.5 * kPi) return d;
            if (depth >= limit)
                throw contour_error("phase_change: phase step failed to resolve");
            const std::complex<double> m = 0.5 * (a + b);
            const std::complex<double> fm = f(m);
            return run(a, m, fa, fm, depth + 1) + run(m, b, fm, fb, depth + 1);
        }
    };
    Walker w{f, max_depth};
    return w.run(z0, z1, f(z0), f(z1), 0);
}

int winding_number(const ComplexFn& f, const Rect& box, double tol) {
    double total = 0.0;
    for (int e = 0; e < 4; ++e)
        total += phase_change(f, box.corner(e), box.corner(e + 1));
    const double w = total / (2.0 * kPi);
    const double rounded = std::round(w);
    if (std::fabs(w - rounded) > tol)
        throw contour_error("winding_number: non-integer winding, contour too close to a zero or pole");
    return static_cast<int>(rounded);
}

int count_poles(const ComplexFn& f, const Rect& box, double tol) {
    const int w = winding_number(f, box, tol);
    return w < 0 ? -w : 0;
}

} // namespace qle
