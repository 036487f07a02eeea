#ifndef OAMQKD_LG_HPP
#define OAMQKD_LG_HPP

#include "oamqkd/beam.hpp"
#include "oamqkd/field.hpp"
#include "oamqkd/grid.hpp"

namespace oamqkd {

/// Sampled Laguerre-Gaussian mode (p = 0) at longitudinal distance z from
/// the waist, including azimuthal, curvature, and Gouy phases. The result
/// is renormalized to unit power on the discrete grid, which keeps modal
/// coefficients contractive even where synthesis is marginally sampled.
ComplexField lg_field(const ModeIndex& mode, double z, const BeamParams& beam,
                      const GridSpec& grid);

/// Diffraction loss in dB of the analytic p = 0 LG mode through a circular
/// aperture of radius r_a at distance z, in vacuum. Evaluated by 1-D radial
/// quadrature, independent of the gridded pipeline, so it doubles as an
/// oracle for the split-step/projection path.
double aperture_transmission_db(const ModeIndex& mode, double z,
                                const BeamParams& beam, double r_a);

} // namespace oamqkd

#endif
