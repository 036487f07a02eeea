#include "oamqkd/phase_screen.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "oamqkd/fft.hpp"
#include "oamqkd/field.hpp"
#include "oamqkd/quadrature.hpp"

namespace oamqkd {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Gaussian spectral coefficients are drawn row-major for every bin
// (including ones later zeroed) so the stream layout is position-stable.
void fill_fft_part(std::vector<double>& screen, double r0, const GridSpec& grid,
                   const TurbulenceProfile& profile, std::mt19937_64& rng) {
    const std::size_t n = grid.n;
    const double df = 1.0 / grid.extent();
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<std::complex<double>> spec(n * n);
    for (std::size_t my = 0; my < n; ++my) {
        const double fy = fft_frequency(my, n, grid.delta);
        for (std::size_t mx = 0; mx < n; ++mx) {
            const double fx = fft_frequency(mx, n, grid.delta);
            const double g1 = gauss(rng);
            const double g2 = gauss(rng);
            const double f = std::hypot(fx, fy);
            if (my == 0 && mx == 0) {
                spec[my * n + mx] = 0.0;  // piston lives in the subharmonics' DC cell
                continue;
            }
            const double amp = std::sqrt(mvk_psd(f, r0, profile)) * df;
            spec[my * n + mx] = std::complex<double>(g1 * amp, g2 * amp);
        }
    }
    fft2_backward(spec, n);
    for (std::size_t i = 0; i < n * n; ++i) screen[i] += spec[i].real();
}

void add_subharmonics(std::vector<double>& screen, double r0, const GridSpec& grid,
                      const TurbulenceProfile& profile, std::mt19937_64& rng, int orders) {
    const std::size_t n = grid.n;
    const double df = 1.0 / grid.extent();
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::complex<double>> row(n), col(n);

    for (int p = 1; p <= orders; ++p) {
        const double dfp = df / std::pow(3.0, p);
        for (int my = -1; my <= 1; ++my) {
            for (int mx = -1; mx <= 1; ++mx) {
                const double g1 = gauss(rng);
                const double g2 = gauss(rng);
                if (mx == 0 && my == 0) continue;  // covered by the next level
                const double fx = mx * dfp;
                const double fy = my * dfp;
                const double f = std::hypot(fx, fy);
                const double amp = std::sqrt(mvk_psd(f, r0, profile)) * dfp;
                const std::complex<double> a(g1 * amp, g2 * amp);
                for (std::size_t i = 0; i < n; ++i) {
                    const double x = grid.coord(i);
                    row[i] = std::polar(1.0, kTwoPi * fx * x);
                    col[i] = std::polar(1.0, kTwoPi * fy * x);
                }
                for (std::size_t iy = 0; iy < n; ++iy) {
                    const std::complex<double> ac = a * col[iy];
                    for (std::size_t ix = 0; ix < n; ++ix)
                        screen[iy * n + ix] += (ac * row[ix]).real();
                }
            }
        }
    }
}

} // namespace

PhaseScreen generate_phase_screen(double r0, const GridSpec& grid,
                                  const TurbulenceProfile& profile, std::mt19937_64& rng,
                                  int subharmonic_orders) {
    if (!(r0 > 0.0)) throw std::invalid_argument("generate_phase_screen: r0 must be positive");
    PhaseScreen s;
    s.grid = grid;
    s.r0 = r0;
    s.phases.assign(grid.size(), 0.0);
    if (std::isinf(r0)) return s;

    fill_fft_part(s.phases, r0, grid, profile, rng);
    if (subharmonic_orders > 0)
        add_subharmonics(s.phases, r0, grid, profile, rng, subharmonic_orders);

    double mean = 0.0;
    for (double v : s.phases) mean += v;
    mean /= static_cast<double>(s.phases.size());
    for (double& v : s.phases) v -= mean;
    return s;
}

std::vector<StructureFunctionPoint> screen_structure_function(
    const std::vector<PhaseScreen>& screens, const std::vector<double>& separations) {
    if (screens.size() < 50)
        throw std::invalid_argument("screen_structure_function: need at least 50 screens");
    const GridSpec grid = screens.front().grid;
    for (const auto& s : screens)
        if (s.grid != grid)
            throw std::invalid_argument("screen_structure_function: mixed grids");

    const std::size_t n = grid.n;
    std::vector<StructureFunctionPoint> out;
    out.reserve(separations.size());
    for (double dr : separations) {
        const auto k = static_cast<std::size_t>(std::lround(dr / grid.delta));
        if (k == 0 || k >= n)
            throw std::invalid_argument("screen_structure_function: separation outside grid");
        double acc = 0.0;
        std::size_t count = 0;
        for (const auto& s : screens) {
            // Horizontal and vertical non-wrapping pairs; subharmonics make
            // the screens aperiodic, so wrapped pairs would be biased.
            for (std::size_t iy = 0; iy < n; ++iy) {
                const double* rowp = &s.phases[iy * n];
                for (std::size_t ix = 0; ix + k < n; ++ix) {
                    const double d = rowp[ix + k] - rowp[ix];
                    acc += d * d;
                }
            }
            for (std::size_t iy = 0; iy + k < n; ++iy) {
                const double* rowp = &s.phases[iy * n];
                const double* rowq = &s.phases[(iy + k) * n];
                for (std::size_t ix = 0; ix < n; ++ix) {
                    const double d = rowq[ix] - rowp[ix];
                    acc += d * d;
                }
            }
            count += 2 * n * (n - k);
        }
        out.push_back({static_cast<double>(k) * grid.delta, acc / static_cast<double>(count)});
    }
    return out;
}

void dump_screen(std::ostream& os, const PhaseScreen& s) {
    ComplexField carrier(s.grid);
    for (std::size_t i = 0; i < s.phases.size(); ++i) carrier.amplitudes[i] = s.phases[i];
    dump_field(os, carrier, "screen", s.r0, 0);
}

PhaseScreen load_screen(std::istream& is) {
    std::string kind;
    double r0 = 0.0;
    const ComplexField carrier = load_field(is, &kind, &r0, nullptr);
    if (kind != "screen") throw std::runtime_error("load_screen: payload is not a screen");
    PhaseScreen s;
    s.grid = carrier.grid;
    s.r0 = r0;
    s.phases.resize(carrier.amplitudes.size());
    for (std::size_t i = 0; i < s.phases.size(); ++i) s.phases[i] = carrier.amplitudes[i].real();
    return s;
}

double theory_structure_function(double dr, double r0, const TurbulenceProfile& profile) {
    if (!(dr > 0.0)) throw std::invalid_argument("theory_structure_function: dr must be positive");
    const double fm = 0.9422 / profile.l_inner;
    const double f0 = 1.0 / profile.L_outer;
    const auto integrand = [&](double f) {
        return mvk_psd(f, r0, profile) * (1.0 - std::cyl_bessel_j(0.0, kTwoPi * f * dr)) * f;
    };
    // Split at the outer-scale knee; the upper piece is oscillatory and the
    // adaptive rule subdivides it as needed.
    const double split = 10.0 * f0;
    const double upper = 4.0 * fm;
    const double integral = integrate(integrand, 0.0, std::min(split, upper), 1e-8, 1e-16) +
                            (upper > split ? integrate(integrand, split, upper, 1e-8, 1e-16) : 0.0);
    return 4.0 * std::numbers::pi * integral;
}

} // namespace oamqkd
