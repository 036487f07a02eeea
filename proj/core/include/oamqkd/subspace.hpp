#ifndef OAMQKD_SUBSPACE_HPP
#define OAMQKD_SUBSPACE_HPP

#include <string>
#include <vector>

namespace oamqkd {

/// Ordered OAM alphabet of a d-dimensional protocol. Subspaces are built
/// from opposite-sign pairs (plus l = 0 for odd d), all |l| <= 4.
struct EncodingSubspace {
    std::vector<int> ls;

    EncodingSubspace() = default;
    explicit EncodingSubspace(std::vector<int> ls_);

    int dim() const { return static_cast<int>(ls.size()); }
    int max_abs_l() const;
    std::string to_string() const;  // e.g. "{-2,2}"
};

/// Every subspace of dimension d conforming to the pair construction,
/// sorted by max |l| then lexicographically (the tie-break order used by
/// the subspace search).
std::vector<EncodingSubspace> subspace_candidates(int d);

} // namespace oamqkd

#endif
