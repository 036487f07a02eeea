#ifndef OAMQKD_CROSSTALK_HPP
#define OAMQKD_CROSSTALK_HPP

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "oamqkd/beam.hpp"
#include "oamqkd/field.hpp"
#include "oamqkd/grid.hpp"
#include "oamqkd/subspace.hpp"

namespace oamqkd {

/// Modal coefficients of one channel realization restricted to an ordered
/// mode list: c(row = received l, col = sent l_t), post-aperture and
/// post-projection, so every column norm is at most 1.
struct CrosstalkMatrix {
    std::vector<int> modes;  // ascending
    Eigen::MatrixXcd c;

    int dim() const { return static_cast<int>(modes.size()); }
    int index_of(int l) const;
    /// Sub-block over a smaller ordered mode list.
    CrosstalkMatrix restricted(const std::vector<int>& sub) const;
};

/// The orthonormal modal measurement Bob performs behind his aperture:
/// analytic LG modes at the receiver plane (vacuum-propagated parameters),
/// hard-truncated to the aperture and symmetrically re-orthonormalized on
/// the grid. An optional transverse offset models a mistracked receiver:
/// projecting onto a basis back-shifted by (-dx, -dy) equals projecting the
/// field shifted by (+dx, +dy) onto the centered basis.
struct ReceiverBasis {
    std::vector<int> modes;
    GridSpec grid;
    std::vector<ComplexField> fields;  // one per mode, orthonormal on the grid
};

ReceiverBasis make_receiver_basis(const std::vector<int>& modes, double z,
                                  const BeamParams& beam, const GridSpec& grid, double r_a,
                                  double shift_dx = 0.0, double shift_dy = 0.0);

/// Projects received (pre-aperture) fields onto the basis.
CrosstalkMatrix project_fields(const ReceiverBasis& basis,
                               const std::map<int, ComplexField>& received);

/// One-call form: builds the centered receiver basis for the subspace and
/// projects. z is the receiver-plane distance used for the analytic modes.
CrosstalkMatrix crosstalk_matrix(const std::map<int, ComplexField>& received,
                                 const EncodingSubspace& subspace, double r_a, double z,
                                 const BeamParams& beam);

} // namespace oamqkd

#endif
