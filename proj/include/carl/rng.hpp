#ifndef CARL_RNG_HPP
#define CARL_RNG_HPP

#include <cmath>
#include <cstdint>

namespace carl {

// Counter-based random streams built on splitmix64.  Sample i of a stream is
// a pure function of (seed, i), so the same seed yields the same sequence no
// matter how the indices are distributed over threads.
namespace rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform double in (0, 1]; never returns 0 so it is safe under log().
inline double uniform_at(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t h = splitmix64(splitmix64(seed) ^ index);
  return (static_cast<double>(h >> 11) + 1.0) * 0x1.0p-53;
}

// Standard normal via Box-Muller on two decorrelated counter draws.
inline double normal_at(std::uint64_t seed, std::uint64_t index) {
  const double u1 = uniform_at(seed, 2 * index);
  const double u2 = uniform_at(seed, 2 * index + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

}  // namespace rng
}  // namespace carl

#endif  // CARL_RNG_HPP
