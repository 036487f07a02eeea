#ifndef OAMQKD_RNG_HPP
#define OAMQKD_RNG_HPP

#include <cstdint>
#include <random>

namespace oamqkd {

/// splitmix64 finalizer; the basis for all stream derivation.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Child stream seed: hash-combines a parent seed with an index. Used as
/// master -> geometry -> realization -> slab so parallel workers get
/// disjoint, order-independent streams.
inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
    return splitmix64(parent ^ splitmix64(index + 0x5851f42d4c957f2dULL));
}

inline std::mt19937_64 make_engine(std::uint64_t seed) { return std::mt19937_64(seed); }

} // namespace oamqkd

#endif
