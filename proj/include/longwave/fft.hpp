#ifndef LONGWAVE_FFT_HPP
#define LONGWAVE_FFT_HPP

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

namespace longwave::detail {

// Thin wrapper around FFTW real transforms.
//
// Plans are cached per transform length and created with
// FFTW_ESTIMATE | FFTW_UNALIGNED so that the new-array execute functions
// accept arbitrary buffers.  Plan creation is serialized (FFTW planning is
// not thread safe); execution on distinct buffers is safe concurrently.
//
// Normalization: forward() returns coefficients c_m = (1/n) sum_j f_j e^{-2pi i jm/n},
// so f_j = sum_m c_m e^{2pi i jm/n} and inverse(forward(f)) == f.
class Fft {
public:
    static void forward(const std::vector<double>& in,
                        std::vector<std::complex<double>>& out) {
        const int n = static_cast<int>(in.size());
        out.resize(static_cast<std::size_t>(n / 2 + 1));
        Plans& p = plans(n);
        std::vector<double> tmp(in);
        fftw_execute_dft_r2c(p.r2c, tmp.data(),
                             reinterpret_cast<fftw_complex*>(out.data()));
        const double scale = 1.0 / n;
        for (auto& c : out) c *= scale;
    }

    static void inverse(const std::vector<std::complex<double>>& in, int n,
                        std::vector<double>& out) {
        if (static_cast<int>(in.size()) != n / 2 + 1)
            throw std::invalid_argument("Fft::inverse: spectrum size mismatch");
        out.resize(static_cast<std::size_t>(n));
        Plans& p = plans(n);
        // c2r destroys its input, work on a copy
        std::vector<std::complex<double>> tmp(in);
        fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(tmp.data()),
                             out.data());
    }

private:
    struct Plans {
        fftw_plan r2c = nullptr;
        fftw_plan c2r = nullptr;
    };

    static Plans& plans(int n) {
        static std::mutex mtx;
        static std::map<int, Plans> cache;
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
        std::vector<double> r(static_cast<std::size_t>(n));
        std::vector<std::complex<double>> c(static_cast<std::size_t>(n / 2 + 1));
        Plans p;
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        p.r2c = fftw_plan_dft_r2c_1d(n, r.data(),
                                     reinterpret_cast<fftw_complex*>(c.data()),
                                     flags);
        p.c2r = fftw_plan_dft_c2r_1d(n,
                                     reinterpret_cast<fftw_complex*>(c.data()),
                                     r.data(), flags);
        if (!p.r2c || !p.c2r)
            throw std::runtime_error("Fft: plan creation failed");
        return cache.emplace(n, p).first->second;
    }
};

}  // namespace longwave::detail

#endif  // LONGWAVE_FFT_HPP
