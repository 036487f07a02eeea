#ifndef OAMQKD_PHASE_SCREEN_HPP
#define OAMQKD_PHASE_SCREEN_HPP

#include <iosfwd>
#include <random>
#include <vector>

#include "oamqkd/grid.hpp"
#include "oamqkd/turbulence.hpp"

namespace oamqkd {

/// One sampled turbulence phase realization, radians, piston removed.
struct PhaseScreen {
    GridSpec grid;
    std::vector<double> phases;
    double r0 = 0.0;

    double& at(std::size_t iy, std::size_t ix) { return phases[iy * grid.n + ix]; }
    const double& at(std::size_t iy, std::size_t ix) const { return phases[iy * grid.n + ix]; }
};

/// FFT spectral synthesis from the modified von Karman PSD with Lane-style
/// subharmonics (3x3 cells per level, DC cell excluded, refined by 1/3 per
/// level). Deterministic for a given engine state. An infinite r0 yields an
/// all-zero screen.
PhaseScreen generate_phase_screen(double r0, const GridSpec& grid,
                                  const TurbulenceProfile& profile, std::mt19937_64& rng,
                                  int subharmonic_orders = 3);

struct StructureFunctionPoint {
    double dr = 0.0;     // actual separation used (pixel-quantized), m
    double value = 0.0;  // D(dr), rad^2
};

/// Ensemble estimate of D(dr) = <[phi(x+dr) - phi(x)]^2> averaged over
/// positions, both axis directions, and screens. Requires >= 50 screens.
std::vector<StructureFunctionPoint> screen_structure_function(
    const std::vector<PhaseScreen>& screens, const std::vector<double>& separations);

/// Reference curve from the PSD: D(dr) = 4 pi * int Phi(f) (1 - J0(2 pi f dr)) f df.
/// Independent of the spectral-synthesis path; used to validate it.
double theory_structure_function(double dr, double r0, const TurbulenceProfile& profile);

/// Debug dump in the field-dump layout with kind "screen" (phases in the
/// real parts; the z header slot carries r0).
void dump_screen(std::ostream& os, const PhaseScreen& s);
PhaseScreen load_screen(std::istream& is);

} // namespace oamqkd

#endif
