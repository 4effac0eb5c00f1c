// spectrum.hpp — Frequency grids, sampled complex spectra, thermal state
//
// Conventions: reduced units hbar = k_B = c = 1 everywhere; Fourier transform
// f(t) = \int d\omega/2\pi f[\omega] e^{-i\omega t}.

#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace qle {

using cplx = std::complex<double>;

/// Uniform symmetric frequency grid: points omega_j = j * delta for
/// j in [-half_count, half_count]. Always contains omega = 0 exactly.
struct FrequencyGrid {
    double delta{0.0};
    int half_count{0};

    int size() const { return 2 * half_count + 1; }
    double omega(int i) const { return (i - half_count) * delta; }
    double max_omega() const { return half_count * delta; }
    /// Index of the sample at -omega_i (exact integer reflection).
    int reflect(int i) const { return 2 * half_count - i; }
    int zero_index() const { return half_count; }

    Eigen::ArrayXd omegas() const {
        Eigen::ArrayXd w(size());
        for (int i = 0; i < size(); ++i) w[i] = omega(i);
        return w;
    }

    bool operator==(const FrequencyGrid& o) const {
        return delta == o.delta && half_count == o.half_count;
    }
};

/// Construct a symmetric grid with 2N+1 points. Throws std::invalid_argument
/// for non-positive step or count.
FrequencyGrid make_grid(double delta_omega, int half_count);

/// A complex-valued function sampled on a symmetric frequency grid.
/// `hermitian` asserts f[-w] = conj(f[w]) (reality of the time-domain signal).
struct ComplexSpectrum {
    FrequencyGrid grid;
    Eigen::ArrayXcd values;
    bool hermitian{false};

    cplx operator[](int i) const { return values[i]; }
    int size() const { return static_cast<int>(values.size()); }
};

/// max_j |f[-w_j] - conj(f[w_j])| over the grid.
double hermitian_residual(const ComplexSpectrum& s);

/// Sample f on the grid. With enforce_hermitian, f is evaluated for w >= 0
/// only and reflected; the hermitian residual of the result is exactly zero.
ComplexSpectrum sample_spectrum(const FrequencyGrid& grid,
                                const std::function<cplx(double)>& f,
                                bool enforce_hermitian = false);

/// Sample a real odd function: evaluated for w > 0 and reflected with
/// negation (exact oddness, half the evaluations).
ComplexSpectrum sample_odd_spectrum(const FrequencyGrid& grid,
                                    const std::function<double(double)>& f);

/// Linear interpolation of a sampled spectrum at arbitrary w inside the grid;
/// returns 0 outside.
cplx interp_spectrum(const ComplexSpectrum& s, double w);

/// Temperature of the input field, reduced units. T = 0 denotes vacuum.
struct ThermalState {
    double temperature{0.0};
};

ThermalState make_thermal_state(double temperature);

} // namespace qle
