#ifndef LONGWAVE_SPECTRAL_HPP
#define LONGWAVE_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "longwave/fft.hpp"
#include "longwave/grid.hpp"

// Periodic Fourier spectral kernels: derivatives, primitives, 2/3-rule
// dealiasing, quadrature, and the norms used by the error metrics.
//
// Spectra are stored in half-complex layout (modes m = 0..N/2) with the
// normalization of detail::Fft, under which Parseval reads
//   integral(f^2) = L * sum_{all modes} |c_m|^2 .

namespace longwave {

using Spectrum = std::vector<std::complex<double>>;

inline Spectrum to_spectrum(const RealField& f) {
    Spectrum s;
    detail::Fft::forward(f.values(), s);
    return s;
}

inline RealField from_spectrum(const Grid1D& grid, const Spectrum& s) {
    RealField out(grid);
    detail::Fft::inverse(s, grid.size(), out.values());
    return out;
}

// Spectral derivative of order 1..4.  Odd orders zero the Nyquist mode
// (its ik multiplier has no real representative).
inline RealField derivative(const RealField& f, int order) {
    if (order < 1 || order > 4)
        throw std::invalid_argument("derivative: order must be in 1..4");
    const Grid1D& g = f.grid();
    Spectrum s = to_spectrum(f);
    const int nyq = g.size() / 2;
    for (int m = 0; m <= nyq; ++m) {
        const double k = g.wavenumber(m);
        std::complex<double> mult;
        switch (order) {
            case 1: mult = {0.0, k}; break;
            case 2: mult = {-k * k, 0.0}; break;
            case 3: mult = {0.0, -k * k * k}; break;
            default: mult = {k * k * k * k, 0.0}; break;
        }
        if ((order % 2 == 1) && m == nyq) mult = 0.0;
        s[static_cast<std::size_t>(m)] *= mult;
    }
    return from_spectrum(g, s);
}

inline double mean(const RealField& f) {
    double acc = 0.0;
    for (double x : f.values()) acc += x;
    return acc / f.size();
}

// Trapezoid rule on periodic data == dx * sum (spectrally accurate).
inline double integral(const RealField& f) {
    double acc = 0.0;
    for (double x : f.values()) acc += x;
    return acc * f.grid().dx();
}

// Zero-mean primitive of a zero-mean field.
inline RealField antiderivative(const RealField& f) {
    if (std::abs(mean(f)) > 1e-12)
        throw std::invalid_argument(
            "antiderivative: field must have zero mean (periodic primitive)");
    const Grid1D& g = f.grid();
    Spectrum s = to_spectrum(f);
    s[0] = 0.0;
    const int nyq = g.size() / 2;
    for (int m = 1; m <= nyq; ++m) {
        const double k = g.wavenumber(m);
        s[static_cast<std::size_t>(m)] /= std::complex<double>(0.0, k);
    }
    s[static_cast<std::size_t>(nyq)] = 0.0;
    return from_spectrum(g, s);
}

// 2/3-rule truncation: modes with m > N/3 are zeroed.  Idempotent.
inline void dealias_spectrum(Spectrum& s, int n) {
    const int keep = n / 3;
    for (int m = keep + 1; m <= n / 2; ++m) s[static_cast<std::size_t>(m)] = 0.0;
}

inline RealField dealias(const RealField& f) {
    Spectrum s = to_spectrum(f);
    dealias_spectrum(s, f.grid().size());
    return from_spectrum(f.grid(), s);
}

inline double norm_linf(const RealField& f) {
    double m = 0.0;
    for (double x : f.values()) m = std::max(m, std::abs(x));
    return m;
}

// H^s_mu norm: ||f||^2 = ||f||_{H^s}^2 + mu ||f_x||_{H^s}^2, evaluated on the
// Fourier side as (L sum (1+k^2)^s (1+mu k^2) |c_m|^2)^{1/2}.
inline double norm_hs_mu(const RealField& f, double s, double mu) {
    if (s < 0.0) throw std::invalid_argument("norm_hs_mu: s must be >= 0");
    if (mu < 0.0) throw std::invalid_argument("norm_hs_mu: mu must be >= 0");
    const Grid1D& g = f.grid();
    Spectrum c = to_spectrum(f);
    const int nyq = g.size() / 2;
    double acc = 0.0;
    for (int m = 0; m <= nyq; ++m) {
        const double k = g.wavenumber(m);
        const double w = std::pow(1.0 + k * k, s) * (1.0 + mu * k * k);
        const double mag2 = std::norm(c[static_cast<std::size_t>(m)]);
        // interior modes represent +/-m
        const double count = (m == 0 || m == nyq) ? 1.0 : 2.0;
        acc += count * w * mag2;
    }
    return std::sqrt(g.length() * acc);
}

inline double norm_l2(const RealField& f) { return norm_hs_mu(f, 0.0, 0.0); }

// Spectrally accurate integral over the subinterval [x(j1), x(j2)] of the
// periodic cell, via the exact primitive of the mean-free part.
inline double integral_between(const RealField& f, int j1, int j2) {
    const double m = mean(f);
    RealField zf = f;
    zf += -m;
    RealField prim = antiderivative(zf);
    const double x1 = f.grid().node(j1);
    const double x2 = f.grid().node(j2);
    return (prim[j2] - prim[j1]) + m * (x2 - x1);
}

}  // namespace longwave

#endif  // LONGWAVE_SPECTRAL_HPP
