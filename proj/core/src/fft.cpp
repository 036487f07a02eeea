#include "oamqkd/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace oamqkd {
namespace {

// FFTW plan creation is not thread-safe; execution via fftw_execute_dft is.
// Plans are created with FFTW_ESTIMATE so plan choice (and therefore output
// bit patterns) never depends on runtime timing, and FFTW_UNALIGNED so one
// plan serves any caller buffer.
std::mutex g_plan_mutex;
std::map<std::pair<std::size_t, int>, fftw_plan> g_plans;

fftw_plan plan_for(std::size_t n, int sign, fftw_complex* buf) {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    const auto key = std::make_pair(n, sign);
    auto it = g_plans.find(key);
    if (it != g_plans.end()) return it->second;
    fftw_plan p = fftw_plan_dft_2d(static_cast<int>(n), static_cast<int>(n), buf, buf, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw std::runtime_error("fftw_plan_dft_2d failed");
    g_plans.emplace(key, p);
    return p;
}

void run(std::vector<std::complex<double>>& data, std::size_t n, int sign) {
    if (data.size() != n * n) throw std::invalid_argument("fft2: size mismatch");
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan p = plan_for(n, sign, buf);
    fftw_execute_dft(p, buf, buf);
}

} // namespace

void fft2_forward(std::vector<std::complex<double>>& data, std::size_t n) {
    run(data, n, FFTW_FORWARD);
}

void fft2_backward(std::vector<std::complex<double>>& data, std::size_t n) {
    run(data, n, FFTW_BACKWARD);
}

} // namespace oamqkd
