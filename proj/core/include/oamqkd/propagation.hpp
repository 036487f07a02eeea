#ifndef OAMQKD_PROPAGATION_HPP
#define OAMQKD_PROPAGATION_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "oamqkd/beam.hpp"
#include "oamqkd/field.hpp"
#include "oamqkd/grid.hpp"
#include "oamqkd/phase_screen.hpp"
#include "oamqkd/turbulence.hpp"

namespace oamqkd {

/// Angular-spectrum vacuum transfer over distance dz. The carrier e^{ikz}
/// is removed, so propagating a sampled LG mode reproduces the analytic
/// mode at the destination plane, curvature and Gouy phases included.
/// dz = 0 returns the input unchanged. Emits an aliasing warning on stderr
/// when dz exceeds the transfer-function sampling limit.
ComplexField vacuum_step(const ComplexField& f, double dz, const BeamParams& beam);

/// True when the quadratic transfer phase would wrap between adjacent
/// frequency samples at the grid edge (dz > n delta^2 / lambda).
bool vacuum_step_aliases(const GridSpec& grid, double dz, double lambda);

/// Everything needed to reproduce one channel realization.
struct ChannelRealizationSpec {
    ChannelGeometry geometry;
    SlabPartition partition;
    TurbulenceProfile profile;
    BeamParams beam;
    GridSpec grid;
    std::uint64_t seed = 0;
    int subharmonic_orders = 3;
    bool edge_absorber = false;
};

/// Split-step downlink: vacuum from the satellite to the top screen, then
/// alternating vacuum segments and phase-screen modulations (one screen at
/// each slab's path midpoint), ending at the ground plane, pre-aperture.
/// screens must hold one screen per slab, bottom slab first.
ComplexField split_step_channel(const ComplexField& input, const ChannelRealizationSpec& spec,
                                const std::vector<PhaseScreen>& screens);

/// Generates the realization's screens from spec.seed (one derived stream
/// per slab), bottom slab first.
std::vector<PhaseScreen> realization_screens(const ChannelRealizationSpec& spec);

/// Propagates sampled LG modes for every l in ls through one shared screen
/// stack; all modes see the identical channel realization. The two-argument
/// form derives the screens from spec.seed.
std::map<int, ComplexField> propagate_mode_set(const std::vector<int>& ls,
                                               const ChannelRealizationSpec& spec);
std::map<int, ComplexField> propagate_mode_set(const std::vector<int>& ls,
                                               const ChannelRealizationSpec& spec,
                                               const std::vector<PhaseScreen>& screens);

/// Exact band-limited translation by (dx, dy) via a spectral phase ramp.
/// Throws when the shift exceeds half the grid extent.
ComplexField translate_field(const ComplexField& f, double dx, double dy);

} // namespace oamqkd

#endif
