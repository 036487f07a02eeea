#include "oamqkd/propagation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "oamqkd/fft.hpp"
#include "oamqkd/lg.hpp"
#include "oamqkd/rng.hpp"

namespace oamqkd {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Carrier-removed angular-spectrum transfer for one step, sampled on the
/// unshifted FFT frequency grid. Evanescent components are zeroed.
struct Transfer {
    std::vector<cdouble> h;
    double kappa2_alias;  // undersampled beyond this; +inf when fully sampled
};

Transfer make_transfer(const GridSpec& grid, double dz, double k, double lambda) {
    const std::size_t n = grid.n;
    std::vector<double> kappa2(n);
    for (std::size_t m = 0; m < n; ++m) {
        const double f = fft_frequency(m, n, grid.delta);
        const double kap = kTwoPi * f;
        kappa2[m] = kap * kap;
    }
    Transfer t;
    t.h.resize(n * n);
    // Phase increment between adjacent frequency samples stays below pi for
    // f < f_alias = 1 / (2 lambda dz df); beyond that the chirp wraps.
    t.kappa2_alias = std::numeric_limits<double>::infinity();
    if (vacuum_step_aliases(grid, dz, lambda)) {
        const double df = 1.0 / grid.extent();
        const double f_alias = 1.0 / (2.0 * lambda * dz * df);
        t.kappa2_alias = (kTwoPi * f_alias) * (kTwoPi * f_alias);
    }
    for (std::size_t my = 0; my < n; ++my) {
        for (std::size_t mx = 0; mx < n; ++mx) {
            const double k2 = k * k - kappa2[my] - kappa2[mx];
            if (k2 <= 0.0) {
                t.h[my * n + mx] = cdouble{0.0, 0.0};
            } else {
                t.h[my * n + mx] = std::polar(1.0, dz * (std::sqrt(k2) - k));
            }
        }
    }
    return t;
}

/// Applies the transfer and reports the fraction of spectral power in the
/// undersampled band (0 when the step is fully sampled).
double apply_transfer(ComplexField& f, const Transfer& transfer) {
    const std::size_t n = f.grid.n;
    fft2_forward(f.amplitudes, n);
    double aliased = 0.0;
    if (std::isfinite(transfer.kappa2_alias)) {
        double total = 0.0;
        for (std::size_t my = 0; my < n; ++my) {
            const double fy = fft_frequency(my, n, f.grid.delta);
            const double k2y = (kTwoPi * fy) * (kTwoPi * fy);
            for (std::size_t mx = 0; mx < n; ++mx) {
                const double fx = fft_frequency(mx, n, f.grid.delta);
                const double p = std::norm(f.amplitudes[my * n + mx]);
                total += p;
                if (k2y + (kTwoPi * fx) * (kTwoPi * fx) > transfer.kappa2_alias) aliased += p;
            }
        }
        aliased = (total > 0.0) ? aliased / total : 0.0;
    }
    const double inv = 1.0 / static_cast<double>(n * n);
    for (std::size_t i = 0; i < n * n; ++i) f.amplitudes[i] *= transfer.h[i] * inv;
    fft2_backward(f.amplitudes, n);
    return aliased;
}

void warn_if_aliased(double fraction, double dz) {
    static std::atomic<bool> warned{false};
    if (fraction > 1e-9 && !warned.exchange(true))
        std::cerr << "vacuum_step: " << fraction * 100.0
                  << "% of spectral power in the undersampled band for dz=" << dz
                  << " m; expect wraparound aliasing (further warnings suppressed)\n";
}

void apply_screen(ComplexField& f, const PhaseScreen& s) {
    if (f.grid != s.grid) throw std::invalid_argument("apply_screen: grid mismatch");
    const std::size_t m = f.amplitudes.size();
    for (std::size_t i = 0; i < m; ++i) f.amplitudes[i] *= std::polar(1.0, s.phases[i]);
}

/// Super-Gaussian edge mask, exp(-(r / 0.47 extent)^16).
void apply_absorber(ComplexField& f) {
    const std::size_t n = f.grid.n;
    const double r_abs = 0.47 * f.grid.extent();
    for (std::size_t iy = 0; iy < n; ++iy) {
        const double y = f.grid.coord(iy);
        for (std::size_t ix = 0; ix < n; ++ix) {
            const double x = f.grid.coord(ix);
            const double t2 = (x * x + y * y) / (r_abs * r_abs);
            const double t8 = ((t2 * t2) * (t2 * t2));
            f.at(iy, ix) *= std::exp(-t8 * t8);
        }
    }
}

struct PathStep {
    double vacuum_dz;         // segment before this screen
    const PhaseScreen* screen;  // nullptr for the final segment to ground
};

/// Screen positions along the path (satellite -> ground) with merged vacuum
/// segments, ending with a trailing vacuum step to the ground plane.
std::vector<PathStep> build_path(const ChannelRealizationSpec& spec,
                                 const std::vector<PhaseScreen>& screens) {
    const auto& slabs = spec.partition.slabs;
    if (screens.size() != slabs.size())
        throw std::invalid_argument("split_step_channel: screen/partition mismatch");
    const double total = spec.geometry.length();
    std::vector<PathStep> steps;
    double s_prev = 0.0;
    // Slabs are stored bottom-first; traverse top-down.
    for (std::size_t j = slabs.size(); j-- > 0;) {
        const double s_mid = spec.geometry.path_from_satellite(slabs[j].screen_altitude);
        steps.push_back({s_mid - s_prev, &screens[j]});
        s_prev = s_mid;
    }
    steps.push_back({total - s_prev, nullptr});
    return steps;
}

void propagate_fields(std::vector<ComplexField>& fields, const ChannelRealizationSpec& spec,
                      const std::vector<PhaseScreen>& screens) {
    const double k = spec.beam.wavenumber();
    const auto steps = build_path(spec, screens);
    for (const auto& step : steps) {
        if (step.vacuum_dz < -1e-6)
            throw std::runtime_error("split_step_channel: inconsistent slab ordering");
        if (step.vacuum_dz > 0.0) {
            const auto transfer = make_transfer(spec.grid, step.vacuum_dz, k, spec.beam.lambda);
            for (auto& f : fields) warn_if_aliased(apply_transfer(f, transfer), step.vacuum_dz);
        }
        if (step.screen) {
            for (auto& f : fields) {
                apply_screen(f, *step.screen);
                if (spec.edge_absorber) apply_absorber(f);
            }
        }
    }
}

} // namespace

bool vacuum_step_aliases(const GridSpec& grid, double dz, double lambda) {
    return dz > static_cast<double>(grid.n) * grid.delta * grid.delta / lambda;
}

ComplexField vacuum_step(const ComplexField& f, double dz, const BeamParams& beam) {
    if (dz < 0.0) throw std::invalid_argument("vacuum_step: dz must be non-negative");
    if (dz == 0.0) return f;
    ComplexField out = f;
    const auto transfer = make_transfer(f.grid, dz, beam.wavenumber(), beam.lambda);
    warn_if_aliased(apply_transfer(out, transfer), dz);
    return out;
}

std::vector<PhaseScreen> realization_screens(const ChannelRealizationSpec& spec) {
    std::vector<PhaseScreen> screens;
    screens.reserve(spec.partition.slabs.size());
    for (std::size_t j = 0; j < spec.partition.slabs.size(); ++j) {
        auto rng = make_engine(derive_seed(spec.seed, j));
        screens.push_back(generate_phase_screen(spec.partition.slabs[j].r0, spec.grid,
                                                spec.profile, rng, spec.subharmonic_orders));
    }
    return screens;
}

ComplexField split_step_channel(const ComplexField& input, const ChannelRealizationSpec& spec,
                                const std::vector<PhaseScreen>& screens) {
    if (input.grid != spec.grid)
        throw std::invalid_argument("split_step_channel: field grid differs from spec grid");
    std::vector<ComplexField> fields{input};
    propagate_fields(fields, spec, screens);
    return std::move(fields.front());
}

ComplexField translate_field(const ComplexField& f, double dx, double dy) {
    const double half = 0.5 * f.grid.extent();
    if (std::abs(dx) > half || std::abs(dy) > half)
        throw std::invalid_argument("translate_field: shift beyond grid extent");
    if (dx == 0.0 && dy == 0.0) return f;
    ComplexField out = f;
    const std::size_t n = f.grid.n;
    fft2_forward(out.amplitudes, n);
    const double inv = 1.0 / static_cast<double>(n * n);
    for (std::size_t my = 0; my < n; ++my) {
        const double fy = fft_frequency(my, n, f.grid.delta);
        for (std::size_t mx = 0; mx < n; ++mx) {
            const double fx = fft_frequency(mx, n, f.grid.delta);
            out.amplitudes[my * n + mx] *=
                std::polar(inv, -kTwoPi * (fx * dx + fy * dy));
        }
    }
    fft2_backward(out.amplitudes, n);
    return out;
}

std::map<int, ComplexField> propagate_mode_set(const std::vector<int>& ls,
                                               const ChannelRealizationSpec& spec) {
    return propagate_mode_set(ls, spec, realization_screens(spec));
}

std::map<int, ComplexField> propagate_mode_set(const std::vector<int>& ls,
                                               const ChannelRealizationSpec& spec,
                                               const std::vector<PhaseScreen>& screens) {
    for (int l : ls)
        if (std::abs(l) > 4)
            throw std::invalid_argument("propagate_mode_set: |l| must be <= 4");
    std::vector<ComplexField> fields;
    fields.reserve(ls.size());
    for (int l : ls) fields.push_back(lg_field(ModeIndex(l), 0.0, spec.beam, spec.grid));
    propagate_fields(fields, spec, screens);
    std::map<int, ComplexField> out;
    for (std::size_t i = 0; i < ls.size(); ++i) out.emplace(ls[i], std::move(fields[i]));
    return out;
}

} // namespace oamqkd
