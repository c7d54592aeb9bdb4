#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace pf {

// Hierarchical deterministic seeding. Every random draw in the project comes
// from substream(root_seed, component_name, index): the FNV-1a hash of the
// component name is mixed with the root seed and the index through
// splitmix64, and the result seeds a mt19937_64. Re-running with the same
// root seed therefore reproduces every stream regardless of how many other
// components drew in between.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t substream_seed(std::uint64_t root, std::string_view component,
                                    std::uint64_t index = 0) {
  return splitmix64(splitmix64(root ^ fnv1a(component)) ^ splitmix64(index));
}

inline std::mt19937_64 substream(std::uint64_t root, std::string_view component,
                                 std::uint64_t index = 0) {
  return std::mt19937_64(substream_seed(root, component, index));
}

}  // namespace pf
