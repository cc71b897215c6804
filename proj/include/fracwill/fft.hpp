#pragma once

#include <complex>
#include <mutex>
#include <vector>

#include <fftw3.h>

namespace fracwill {

namespace detail {
inline std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace detail

/// Forward DFT of a real periodic sequence; returns n/2+1 complex bins.
inline std::vector<std::complex<double>> rfft(const std::vector<double>& in) {
    const int n = static_cast<int>(in.size());
    std::vector<std::complex<double>> out(n / 2 + 1);
    std::vector<double> buf(in);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        plan = fftw_plan_dft_r2c_1d(n, buf.data(),
                                    reinterpret_cast<fftw_complex*>(out.data()),
                                    FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

/// Inverse of rfft, normalized so irfft(rfft(x)) == x.
inline std::vector<double> irfft(std::vector<std::complex<double>> spec, int n) {
    std::vector<double> out(n);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        plan = fftw_plan_dft_c2r_1d(n, reinterpret_cast<fftw_complex*>(spec.data()),
                                    out.data(), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        fftw_destroy_plan(plan);
    }
    const double scale = 1.0 / n;
    for (double& v : out) v *= scale;
    return out;
}

/// Applies a real Fourier multiplier m(k) (k = 0..n/2, cycles per period)
/// to a real periodic sequence.
template <typename Multiplier>
std::vector<double> apply_fourier_multiplier(const std::vector<double>& in, Multiplier m) {
    const int n = static_cast<int>(in.size());
    auto spec = rfft(in);
    for (int k = 0; k < static_cast<int>(spec.size()); ++k) spec[k] *= m(k);
    // Nyquist bin of an even-length transform must stay real.
    if (n % 2 == 0) spec.back() = std::complex<double>(spec.back().real(), 0.0);
    return irfft(std::move(spec), n);
}

/// Spectral derivative d/dx of a periodic sequence sampled on [0, period).
inline std::vector<double> spectral_derivative(const std::vector<double>& in, double period) {
    const int n = static_cast<int>(in.size());
    auto spec = rfft(in);
    const double w = 2.0 * 3.141592653589793238462643383279502884 / period;
    for (int k = 0; k < static_cast<int>(spec.size()); ++k)
        spec[k] *= std::complex<double>(0.0, w * k);
    if (n % 2 == 0) spec.back() = 0.0;  // derivative of the Nyquist mode
    return irfft(std::move(spec), n);
}

}  // namespace fracwill
