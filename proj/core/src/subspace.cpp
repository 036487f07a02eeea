#include "oamqkd/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace oamqkd {

EncodingSubspace::EncodingSubspace(std::vector<int> ls_) : ls(std::move(ls_)) {
    const int d = dim();
    if (d < 2 || d > 9) throw std::invalid_argument("EncodingSubspace: d must be in [2, 9]");
    std::set<int> uniq(ls.begin(), ls.end());
    if (static_cast<int>(uniq.size()) != d)
        throw std::invalid_argument("EncodingSubspace: duplicate OAM numbers");
    for (int l : ls) {
        if (std::abs(l) > 4) throw std::invalid_argument("EncodingSubspace: |l| must be <= 4");
        if (l != 0 && uniq.count(-l) == 0)
            throw std::invalid_argument("EncodingSubspace: OAM numbers must come in +/- pairs");
    }
    if ((d % 2 == 1) != (uniq.count(0) == 1))
        throw std::invalid_argument("EncodingSubspace: l = 0 belongs to odd dimensions only");
    std::sort(ls.begin(), ls.end());
}

int EncodingSubspace::max_abs_l() const {
    int m = 0;
    for (int l : ls) m = std::max(m, std::abs(l));
    return m;
}

std::string EncodingSubspace::to_string() const {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < ls.size(); ++i) os << (i ? "," : "") << ls[i];
    os << "}";
    return os.str();
}

std::vector<EncodingSubspace> subspace_candidates(int d) {
    if (d < 2 || d > 9) throw std::invalid_argument("subspace_candidates: d must be in [2, 9]");
    const int pairs = d / 2;
    const bool with_zero = (d % 2 == 1);

    // Choose `pairs` distinct values from {1,2,3,4}.
    std::vector<std::vector<int>> combos;
    std::vector<int> cur;
    const auto rec = [&](auto&& self, int next) -> void {
        if (static_cast<int>(cur.size()) == pairs) {
            combos.push_back(cur);
            return;
        }
        for (int v = next; v <= 4; ++v) {
            cur.push_back(v);
            self(self, v + 1);
            cur.pop_back();
        }
    };
    rec(rec, 1);

    std::vector<EncodingSubspace> out;
    for (const auto& combo : combos) {
        std::vector<int> ls;
        if (with_zero) ls.push_back(0);
        for (int v : combo) {
            ls.push_back(v);
            ls.push_back(-v);
        }
        out.emplace_back(std::move(ls));
    }
    std::sort(out.begin(), out.end(), [](const EncodingSubspace& a, const EncodingSubspace& b) {
        if (a.max_abs_l() != b.max_abs_l()) return a.max_abs_l() < b.max_abs_l();
        return a.ls < b.ls;
    });
    return out;
}

} // namespace oamqkd
