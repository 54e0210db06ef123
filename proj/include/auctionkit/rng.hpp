#pragma once

#include <cstdint>

namespace auctionkit {

// Counter-based uniform variates: u01(seed, i) is a pure function of its
// arguments, so sequences are reproducible regardless of evaluation order,
// thread count, or platform. Streams let independent consumers (rows of a
// design table, rounds of a simulation) share one seed without overlap.

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_bits(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed ^ splitmix64(index));
}

inline std::uint64_t mix_bits(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return splitmix64(splitmix64(seed ^ splitmix64(stream)) ^ splitmix64(index));
}

// Uniform on the open interval (0,1); never returns 0 or 1, so quantile
// transforms stay finite.
inline double u01(std::uint64_t seed, std::uint64_t index) {
    return (static_cast<double>(mix_bits(seed, index) >> 11) + 0.5) * 0x1.0p-53;
}

inline double u01(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return (static_cast<double>(mix_bits(seed, stream, index) >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace auctionkit
