#pragma once
#include <cstdint>
#include <random>
#include <string_view>

namespace pam {

using Rng = std::mt19937_64;

// splitmix64 finaliser
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// 64-bit FNV-1a
inline std::uint64_t hash_label(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Sub-stream seed: mix(master ^ mix(hash(purpose)) + replica).
inline std::uint64_t stream_seed(std::uint64_t master, std::string_view purpose,
                                 std::uint64_t replica = 0) {
    return mix64((master ^ mix64(hash_label(purpose))) + mix64(replica + 1));
}

inline Rng make_stream(std::uint64_t master, std::string_view purpose,
                       std::uint64_t replica = 0) {
    return Rng(stream_seed(master, purpose, replica));
}

/// Uniform on [0,1) with 53 random bits.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform on (0,1).
inline double uniform_open(Rng& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace pam
