#ifndef OAMQKD_BEAM_HPP
#define OAMQKD_BEAM_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oamqkd {

/// Gaussian-beam geometry: waist radius w0 and wavelength, both in meters.
/// Wavenumber and Rayleigh range are always derived, never stored.
struct BeamParams {
    double w0 = 0.0;
    double lambda = 0.0;

    BeamParams() = default;
    BeamParams(double w0_, double lambda_) : w0(w0_), lambda(lambda_) {
        if (!(w0 > 0.0)) throw std::invalid_argument("BeamParams: w0 must be positive");
        if (!(lambda > 0.0)) throw std::invalid_argument("BeamParams: lambda must be positive");
    }

    double wavenumber() const { return 2.0 * std::numbers::pi / lambda; }
    double rayleigh_range() const { return std::numbers::pi * w0 * w0 / lambda; }
};

/// Beam radius w(z) = w0 sqrt(1 + (z/zR)^2).
inline double beam_radius(const BeamParams& beam, double z) {
    if (z < 0.0) throw std::invalid_argument("beam_radius: z must be non-negative");
    const double zr = beam.rayleigh_range();
    const double t = z / zr;
    return beam.w0 * std::sqrt(1.0 + t * t);
}

/// OAM mode label. Only the p = 0 radial subspace is modeled.
struct ModeIndex {
    int l = 0;
    int p = 0;

    ModeIndex() = default;
    explicit ModeIndex(int l_, int p_ = 0) : l(l_), p(p_) {
        if (p != 0) throw std::invalid_argument("ModeIndex: only p = 0 is supported");
    }
};

} // namespace oamqkd

#endif
