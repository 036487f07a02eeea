#ifndef OAMQKD_FFT_HPP
#define OAMQKD_FFT_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace oamqkd {

/// In-place 2-D DFT of an n x n row-major array, exp(-i 2 pi ...) sign,
/// unnormalized (FFTW convention). Thread-safe; plans are cached per size.
void fft2_forward(std::vector<std::complex<double>>& data, std::size_t n);

/// In-place inverse-sign 2-D DFT, unnormalized: forward followed by
/// backward multiplies the data by n^2.
void fft2_backward(std::vector<std::complex<double>>& data, std::size_t n);

/// Unwrapped DFT frequency for bin m of n samples spaced delta apart,
/// in cycles per meter.
inline double fft_frequency(std::size_t m, std::size_t n, double delta) {
    const auto half = n / 2;
    const double idx = (m < half) ? static_cast<double>(m)
                                  : static_cast<double>(m) - static_cast<double>(n);
    return idx / (static_cast<double>(n) * delta);
}

} // namespace oamqkd

#endif
