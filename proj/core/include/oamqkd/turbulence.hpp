#ifndef OAMQKD_TURBULENCE_HPP
#define OAMQKD_TURBULENCE_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

namespace oamqkd {

/// Atmospheric turbulence description: Hufnagel-Valley C_n^2 profile driven
/// by the Bufton wind model, plus von Karman outer/inner scales.
struct TurbulenceProfile {
    double A = 0.0;        // ground-level structure constant, m^{-2/3}
    double Vg = 0.0;       // ground wind speed, m/s
    double L_outer = 0.0;  // outer scale, m
    double l_inner = 0.0;  // inner scale, m
    double vrms = 0.0;     // RMS wind, derived from Vg

    TurbulenceProfile() = default;
    TurbulenceProfile(double A_, double Vg_, double L_outer_, double l_inner_);
};

/// Bufton wind speed at altitude h for ground speed Vg.
double bufton_wind_speed(double h, double Vg);

/// RMS wind over the 5-20 km band, sqrt((1/15e3) * integral of V^2).
double bufton_vrms(double Vg);

/// Hufnagel-Valley structure constant at altitude h, m^{-2/3}.
double cn2(double h, const TurbulenceProfile& profile);

/// Slant-path geometry from a ground station at h0 to a satellite at H,
/// under zenith angle theta_z (radians).
struct ChannelGeometry {
    double H = 0.0;
    double h0 = 0.0;
    double theta_z = 0.0;

    ChannelGeometry() = default;
    ChannelGeometry(double H_, double h0_, double theta_z_) : H(H_), h0(h0_), theta_z(theta_z_) {
        if (!(H > h0) || h0 < 0.0)
            throw std::invalid_argument("ChannelGeometry: require H > h0 >= 0");
        if (!(theta_z >= 0.0) || !(theta_z < 1.5707963267948966))
            throw std::invalid_argument("ChannelGeometry: require 0 <= theta_z < pi/2");
    }

    double length() const { return (H - h0) / std::cos(theta_z); }
    /// Path length from the satellite down to altitude h.
    double path_from_satellite(double h) const { return (H - h) / std::cos(theta_z); }
};

/// Plane-wave Rytov variance over altitudes [h_lo, h_hi]; the (h - h0)^{5/6}
/// weight is always referenced to the channel's ground altitude so per-slab
/// values recompose to the full-channel value.
double rytov_variance(const ChannelGeometry& geom, const TurbulenceProfile& profile,
                      double lambda, double h_lo, double h_hi);
double rytov_variance(const ChannelGeometry& geom, const TurbulenceProfile& profile,
                      double lambda);

/// Weak-to-strong scintillation index as a function of the Rytov variance.
double scintillation_index(double sigma_r2);

/// Fried parameter over [h_lo, h_hi]; +infinity for a turbulence-free
/// interval.
double fried_parameter(const ChannelGeometry& geom, const TurbulenceProfile& profile,
                       double lambda, double h_lo, double h_hi);
double fried_parameter(const ChannelGeometry& geom, const TurbulenceProfile& profile,
                       double lambda);

struct Slab {
    double h_lo = 0.0;          // lower boundary altitude, m
    double h_hi = 0.0;          // upper boundary altitude, m
    double thickness_path = 0.0;  // slant thickness, m
    double rytov2 = 0.0;        // local Rytov variance (ground-referenced weight)
    double scint2 = 0.0;        // local scintillation index
    double r0 = 0.0;            // local Fried parameter, m
    double screen_altitude = 0.0;  // slab midpoint
};

struct SlabPartition {
    ChannelGeometry geometry;
    std::vector<Slab> slabs;      // ascending altitude
    double total_rytov2 = 0.0;
    double total_scint2 = 0.0;

    std::size_t count() const { return slabs.size(); }
};

/// Splits [h0, H] into the fewest slabs (greedy sweep upward, then a merge
/// pass) such that every slab satisfies sigma_I_j^2 < 0.1 and
/// sigma_I_j^2 < 0.1 * sigma_I^2(total). Throws if more than 64 slabs would
/// be needed.
SlabPartition partition_slabs(const ChannelGeometry& geom, const TurbulenceProfile& profile,
                              double lambda);

/// Modified von Karman phase PSD, rad^2 m^2, with f in cycles/m.
double mvk_psd(double f, double r0, const TurbulenceProfile& profile);

} // namespace oamqkd

#endif
