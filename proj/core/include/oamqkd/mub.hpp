#ifndef OAMQKD_MUB_HPP
#define OAMQKD_MUB_HPP

#include <Eigen/Dense>
#include <vector>

namespace oamqkd {

/// Mutually unbiased bases over the standard basis of C^d. Each basis is a
/// unitary matrix whose columns are the basis vectors.
struct MUBSet {
    int d = 0;
    std::vector<Eigen::MatrixXcd> bases;

    int basis_count() const { return static_cast<int>(bases.size()); }
};

/// d + 1 bases for d in {2,3,4,5,7,8,9}; the standard and Fourier bases for
/// d = 6. Prime d uses Weyl-operator eigenbases, prime powers the
/// Galois-field construction (additive characters for d = 9, joint
/// eigenbases of the commuting Pauli classes for d = 4, 8).
MUBSet build_mubs(int d);

} // namespace oamqkd

#endif
