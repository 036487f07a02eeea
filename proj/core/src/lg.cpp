#include "oamqkd/lg.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "oamqkd/quadrature.hpp"

namespace oamqkd {

namespace {

double factorial(int m) {
    double r = 1.0;
    for (int i = 2; i <= m; ++i) r *= i;
    return r;
}

/// |R_{0,l}(r,z)|^2 * r, the radial power density (azimuth already integrated
/// out). Integrates to 1 over r in [0, inf).
double radial_power_density(int l, double r, double w) {
    const int la = std::abs(l);
    const double u = 2.0 * r * r / (w * w);
    // |R|^2 = (4 / (|l|! w^2)) u^{|l|} e^{-u}; times r from the area element.
    return 4.0 / (factorial(la) * w * w) * std::pow(u, la) * std::exp(-u) * r;
}

} // namespace

ComplexField lg_field(const ModeIndex& mode, double z, const BeamParams& beam,
                      const GridSpec& grid) {
    if (z < 0.0) throw std::invalid_argument("lg_field: z must be non-negative");
    if (mode.p != 0) throw std::invalid_argument("lg_field: only p = 0 is supported");

    const double w = beam_radius(beam, z);
    if (w < 4.0 * grid.delta)
        throw std::runtime_error("lg_field: grid undersampled, w(z) < 4*delta");
    if (grid.extent() < 4.0 * w)
        throw std::runtime_error("lg_field: grid too small, extent < 4*w(z)");

    const int la = std::abs(mode.l);
    const double zr = beam.rayleigh_range();
    const double k = beam.wavenumber();
    const double gouy = (la + 1) * std::atan2(z, zr);
    // Curvature phase k r^2 z / (2 (z^2 + zR^2)); zero exactly at the waist.
    const double curv = k * z / (2.0 * (z * z + zr * zr));
    const double amp0 = 2.0 / std::sqrt(factorial(la)) / w / std::sqrt(2.0 * std::numbers::pi);

    ComplexField f(grid);
    const std::size_t n = grid.n;
    for (std::size_t iy = 0; iy < n; ++iy) {
        const double y = grid.coord(iy);
        for (std::size_t ix = 0; ix < n; ++ix) {
            const double x = grid.coord(ix);
            const double r2 = x * x + y * y;
            const double r = std::sqrt(r2);
            double radial = amp0 * std::exp(-r2 / (w * w));
            if (la > 0) {
                // Analytic limit at the axis: zero amplitude for |l| > 0.
                radial *= std::pow(r * std::sqrt(2.0) / w, la);
            }
            const double theta = (r2 > 0.0) ? std::atan2(y, x) : 0.0;
            const double phase = mode.l * theta + curv * r2 - gouy;
            f.at(iy, ix) = std::polar(radial, phase);
        }
    }
    f.normalize_power();
    return f;
}

double aperture_transmission_db(const ModeIndex& mode, double z,
                                const BeamParams& beam, double r_a) {
    if (!(r_a > 0.0)) throw std::invalid_argument("aperture_transmission_db: r_a must be positive");
    const double w = beam_radius(beam, z);
    const double upper = std::min(r_a, 30.0 * w);
    const int l = mode.l;
    const double inside =
        integrate([l, w](double r) { return radial_power_density(l, r, w); }, 0.0, upper,
                  1e-12, 1e-18);
    // Analytic total power is 1; clamp against rounding.
    const double frac = std::min(1.0, std::max(inside, 1e-300));
    return -10.0 * std::log10(frac);
}

} // namespace oamqkd
