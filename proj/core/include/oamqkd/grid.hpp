#ifndef OAMQKD_GRID_HPP
#define OAMQKD_GRID_HPP

#include <cstddef>
#include <stdexcept>

namespace oamqkd {

/// Square sampling grid for transverse fields: n points per side, spacing
/// delta in meters. Coordinates are cell centers, x_i = (i - n/2) * delta,
/// so the origin is a grid point for even n.
struct GridSpec {
    std::size_t n = 0;
    double delta = 0.0;

    GridSpec() = default;
    GridSpec(std::size_t n_, double delta_) : n(n_), delta(delta_) { validate(); }

    void validate() const {
        if (n < 64 || (n & (n - 1)) != 0)
            throw std::invalid_argument("GridSpec: n must be a power of two >= 64");
        if (!(delta > 0.0))
            throw std::invalid_argument("GridSpec: delta must be positive");
    }

    double extent() const { return static_cast<double>(n) * delta; }
    double coord(std::size_t i) const {
        return (static_cast<double>(i) - static_cast<double>(n) / 2.0) * delta;
    }
    /// Cell area, the measure used by discrete inner products.
    double cell_area() const { return delta * delta; }
    std::size_t size() const { return n * n; }

    bool operator==(const GridSpec& o) const { return n == o.n && delta == o.delta; }
    bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

} // namespace oamqkd

#endif
