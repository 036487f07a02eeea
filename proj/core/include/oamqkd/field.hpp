#ifndef OAMQKD_FIELD_HPP
#define OAMQKD_FIELD_HPP

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "oamqkd/grid.hpp"

namespace oamqkd {

using cdouble = std::complex<double>;

/// Sampled transverse complex amplitude, row-major with y as the row index.
/// Treat as immutable once built; operations return new fields.
struct ComplexField {
    GridSpec grid;
    std::vector<cdouble> amplitudes;

    ComplexField() = default;
    explicit ComplexField(const GridSpec& g) : grid(g), amplitudes(g.size()) {}

    cdouble& at(std::size_t iy, std::size_t ix) { return amplitudes[iy * grid.n + ix]; }
    const cdouble& at(std::size_t iy, std::size_t ix) const { return amplitudes[iy * grid.n + ix]; }

    /// Total power: sum |psi|^2 * delta^2.
    double power() const;

    /// Rescale so power() == 1. Throws on an all-zero field.
    void normalize_power();
};

/// Discrete inner product sum(conj(a) * b) * delta^2. Grids must match.
cdouble overlap(const ComplexField& a, const ComplexField& b);

/// Hard circular mask of radius r_a centered on the grid origin.
ComplexField apply_aperture(const ComplexField& f, double r_a);

/// Fraction of f's power inside radius r_a.
double power_within_radius(const ComplexField& f, double r_a);

/// Debug dump: structured-text header followed by raw row-major complex
/// doubles. `kind` is "field" or "screen"; z and l describe the payload.
void dump_field(std::ostream& os, const ComplexField& f, const std::string& kind,
                double z, int l);
ComplexField load_field(std::istream& is, std::string* kind_out = nullptr,
                        double* z_out = nullptr, int* l_out = nullptr);

} // namespace oamqkd

#endif
