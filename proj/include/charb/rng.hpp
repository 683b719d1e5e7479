#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace charb::rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_string(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

/// Mixes an arbitrary list of 64-bit ids into one stream seed. Used to
/// derive independent per-sequence / per-element RNG streams so results
/// do not depend on evaluation order or worker count.
template <typename... Ids>
std::uint64_t mix(std::uint64_t seed, Ids... ids) {
  std::uint64_t state = seed ^ 0x6a09e667f3bcc909ull;
  std::uint64_t out = splitmix64(state);
  ((state ^= static_cast<std::uint64_t>(ids), out ^= splitmix64(state)), ...);
  return out;
}

template <typename... Ids>
std::mt19937_64 make_stream(std::uint64_t seed, Ids... ids) {
  return std::mt19937_64(mix(seed, ids...));
}

}  // namespace charb::rng
