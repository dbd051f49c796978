#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "ibdl/grid.hpp"

// Internal FFT layer: real-to-complex transforms on the N x N grid via FFTW.
// Convention: forward is unnormalized, inverse carries the 1/N^2 factor.
// Spectra are stored row-major as [ky][kx] with kx = 0..N/2 (r2c half plane).

namespace ibdl::detail {

struct FftPlan {
    int n = 0;
    double* real_buf = nullptr;
    fftw_complex* cplx_buf = nullptr;
    fftw_plan fwd{};
    fftw_plan bwd{};
    std::mutex mutex;

    explicit FftPlan(int n_) : n(n_) {
        real_buf = fftw_alloc_real(size_t(n) * n);
        cplx_buf = fftw_alloc_complex(size_t(n) * (n / 2 + 1));
        fwd = fftw_plan_dft_r2c_2d(n, n, real_buf, cplx_buf, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_2d(n, n, cplx_buf, real_buf, FFTW_ESTIMATE);
    }
    ~FftPlan() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(real_buf);
        fftw_free(cplx_buf);
    }
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;
};

// FFTW planning is not thread-safe; the cache hands out per-size plans and
// each plan serializes its own buffer use.
inline FftPlan& plan_for(int n) {
    static std::mutex cache_mutex;
    static std::map<int, std::unique_ptr<FftPlan>> cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, std::make_unique<FftPlan>(n)).first;
    return *it->second;
}

using Spectrum = std::vector<std::complex<double>>;

inline Spectrum fft_forward(const ScalarField& f) {
    const int n = f.spec.n;
    FftPlan& p = plan_for(n);
    std::lock_guard<std::mutex> lock(p.mutex);
    for (size_t idx = 0; idx < f.values.size(); ++idx) p.real_buf[idx] = f.values[idx];
    fftw_execute(p.fwd);
    const size_t m = size_t(n) * (n / 2 + 1);
    Spectrum out(m);
    for (size_t idx = 0; idx < m; ++idx)
        out[idx] = {p.cplx_buf[idx][0], p.cplx_buf[idx][1]};
    return out;
}

inline ScalarField fft_inverse(const GridSpec& spec, const Spectrum& hat) {
    const int n = spec.n;
    FftPlan& p = plan_for(n);
    std::lock_guard<std::mutex> lock(p.mutex);
    const size_t m = size_t(n) * (n / 2 + 1);
    for (size_t idx = 0; idx < m; ++idx) {
        p.cplx_buf[idx][0] = hat[idx].real();
        p.cplx_buf[idx][1] = hat[idx].imag();
    }
    fftw_execute(p.bwd);
    ScalarField out(spec);
    const double scale = 1.0 / (double(n) * double(n));
    for (size_t idx = 0; idx < out.values.size(); ++idx)
        out.values[idx] = p.real_buf[idx] * scale;
    return out;
}

/// Signed integer frequency for row index j of an N-point transform.
inline int signed_freq(int j, int n) { return j <= n / 2 ? j : j - n; }

}  // namespace ibdl::detail
