#include "oamqkd/crosstalk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oamqkd/lg.hpp"
#include "oamqkd/propagation.hpp"

namespace oamqkd {

int CrosstalkMatrix::index_of(int l) const {
    const auto it = std::find(modes.begin(), modes.end(), l);
    if (it == modes.end()) throw std::invalid_argument("CrosstalkMatrix: mode not present");
    return static_cast<int>(it - modes.begin());
}

CrosstalkMatrix CrosstalkMatrix::restricted(const std::vector<int>& sub) const {
    CrosstalkMatrix out;
    out.modes = sub;
    const int d = static_cast<int>(sub.size());
    out.c.resize(d, d);
    for (int row = 0; row < d; ++row) {
        const int ri = index_of(sub[row]);
        for (int col = 0; col < d; ++col) out.c(row, col) = c(ri, index_of(sub[col]));
    }
    return out;
}

ReceiverBasis make_receiver_basis(const std::vector<int>& modes, double z,
                                  const BeamParams& beam, const GridSpec& grid, double r_a,
                                  double shift_dx, double shift_dy) {
    ReceiverBasis basis;
    basis.modes = modes;
    basis.grid = grid;

    std::vector<ComplexField> raw;
    raw.reserve(modes.size());
    for (int l : modes) {
        ComplexField m = apply_aperture(lg_field(ModeIndex(l), z, beam, grid), r_a);
        m.normalize_power();
        raw.push_back(std::move(m));
    }

    // Symmetric (Loewdin) re-orthonormalization: the truncated modes are
    // orthogonal only up to grid discretization, and downstream invariants
    // (column norms <= 1) want an exactly orthonormal measurement.
    const int k = static_cast<int>(raw.size());
    Eigen::MatrixXcd gram(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) gram(i, j) = overlap(raw[i], raw[j]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("make_receiver_basis: Gram eigendecomposition failed");
    if (es.eigenvalues().minCoeff() < 1e-6)
        throw std::runtime_error("make_receiver_basis: truncated modes nearly dependent");
    const Eigen::MatrixXcd inv_sqrt =
        es.eigenvectors() *
        es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
        es.eigenvectors().adjoint();

    basis.fields.reserve(raw.size());
    for (int i = 0; i < k; ++i) {
        ComplexField combo(grid);
        for (int j = 0; j < k; ++j) {
            const cdouble w = inv_sqrt(j, i);
            if (std::abs(w) < 1e-300) continue;
            const auto& src = raw[j].amplitudes;
            for (std::size_t idx = 0; idx < src.size(); ++idx)
                combo.amplitudes[idx] += w * src[idx];
        }
        if (shift_dx != 0.0 || shift_dy != 0.0)
            combo = translate_field(combo, shift_dx, shift_dy);
        basis.fields.push_back(std::move(combo));
    }
    return basis;
}

CrosstalkMatrix project_fields(const ReceiverBasis& basis,
                               const std::map<int, ComplexField>& received) {
    CrosstalkMatrix out;
    out.modes = basis.modes;
    const int d = static_cast<int>(basis.modes.size());
    out.c.resize(d, d);
    for (int col = 0; col < d; ++col) {
        const auto it = received.find(basis.modes[col]);
        if (it == received.end())
            throw std::invalid_argument("project_fields: received fields missing a mode");
        for (int row = 0; row < d; ++row)
            out.c(row, col) = overlap(basis.fields[row], it->second);
    }
    return out;
}

CrosstalkMatrix crosstalk_matrix(const std::map<int, ComplexField>& received,
                                 const EncodingSubspace& subspace, double r_a, double z,
                                 const BeamParams& beam) {
    if (received.empty()) throw std::invalid_argument("crosstalk_matrix: empty input");
    const GridSpec grid = received.begin()->second.grid;
    const auto basis = make_receiver_basis(subspace.ls, z, beam, grid, r_a);
    return project_fields(basis, received);
}

} // namespace oamqkd
