#pragma once

#include <cstdint>
#include <cmath>

namespace sac {

// SplitMix64 finalizer. Used as the avalanche stage of the counter-based
// generator below and for deriving stream seeds from (master seed, indices).
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t seed_combine(std::uint64_t a, std::uint64_t b) {
    return mix64(a ^ (mix64(b) + 0x9e3779b97f4a7c15ULL));
}

inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t lane0,
                                 std::uint64_t lane1) {
    return seed_combine(seed_combine(master, lane0), lane1);
}

// uniform in (0,1), strictly away from both endpoints
inline double unit_double(std::uint64_t h) {
    return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

// Counter-based standard normal draw addressed by (stream, step, lane).
// Stateless: the same key always yields the same variate, independent of
// evaluation order or thread schedule.
inline double normal_draw(std::uint64_t stream, std::uint64_t step,
                          std::uint64_t lane) {
    const std::uint64_t k = mix64(stream ^ mix64(step + 0x632be59bd9b4e019ULL) ^
                                  mix64(lane + 0x9e3779b97f4a7c15ULL));
    const double u1 = unit_double(mix64(k + 1));
    const double u2 = unit_double(mix64(k + 2));
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
}

// Brownian increment over a step of length dt for one noise mode.
inline double brownian_increment(std::uint64_t stream, std::uint64_t step,
                                 std::uint64_t mode, double dt) {
    return std::sqrt(dt) * normal_draw(stream, step, mode);
}

}  // namespace sac
