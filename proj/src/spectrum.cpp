#include "qle/spectrum.hpp"

#include <cmath>
#include <stdexcept>

namespace qle {

FrequencyGrid make_grid(double delta_omega, int half_count) {
    if (!(delta_omega > 0.0))
        throw std::invalid_argument("make_grid: delta_omega must be > 0");
    if (half_count < 1)
        throw std::invalid_argument("make_grid: half_count must be >= 1");
    return FrequencyGrid{delta_omega, half_count};
}

double hermitian_residual(const ComplexSpectrum& s) {
    const int n = s.size();
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const cplx d = s.values[s.grid.reflect(i)] - std::conj(s.values[i]);
        worst = std::max(worst, std::abs(d));
    }
    return worst;
}

ComplexSpectrum sample_spectrum(const FrequencyGrid& grid,
                                const std::function<cplx(double)>& f,
                                bool enforce_hermitian) {
    ComplexSpectrum s;
    s.grid = grid;
    s.values.resize(grid.size());
    if (enforce_hermitian) {
        for (int i = grid.zero_index(); i < grid.size(); ++i) {
            const cplx v = f(grid.omega(i));
            s.values[i] = v;
            s.values[grid.reflect(i)] = std::conj(v);
        }
        s.hermitian = true;
    } else {
        for (int i = 0; i < grid.size(); ++i) s.values[i] = f(grid.omega(i));
    }
    return s;
}

ComplexSpectrum sample_odd_spectrum(const FrequencyGrid& grid,
                                    const std::function<double(double)>& f) {
    ComplexSpectrum s;
    s.grid = grid;
    s.values.resize(grid.size());
    s.values[grid.zero_index()] = cplx(0.0, 0.0);
    for (int i = grid.zero_index() + 1; i < grid.size(); ++i) {
        const double v = f(grid.omega(i));
        s.values[i] = cplx(v, 0.0);
        s.values[grid.reflect(i)] = cplx(-v, 0.0);
    }
    return s;
}

cplx interp_spectrum(const ComplexSpectrum& s, double w) {
    const auto& g = s.grid;
    const double x = w / g.delta + g.half_count;
    if (x < 0.0 || x > g.size() - 1) return cplx(0.0, 0.0);
    const int i0 = std::min(static_cast<int>(std::floor(x)), g.size() - 2);
    const double t = x - i0;
    return (1.0 - t) * s.values[i0] + t * s.values[i0 + 1];
}

ThermalState make_thermal_state(double temperature) {
    if (!(temperature >= 0.0))
        throw std::invalid_argument("thermal state requires T >= 0");
    return ThermalState{temperature};
}

} // namespace qle
