#ifndef MLSA_RANDOM_HPP
#define MLSA_RANDOM_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace mlsa {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// 64-bit FNV-1a.
constexpr std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/**
 * Seed for a named component. Every random stream in the project is derived
 * from one root seed this way, e.g. derive_seed(root, "instance/3") or
 * derive_seed(derive_seed(root, "logistic"), "mu_b"), so results do not
 * depend on evaluation order or thread count.
 */
constexpr std::uint64_t derive_seed(std::uint64_t root, std::string_view component) {
  return mix64(root ^ mix64(fnv1a(component)));
}

inline Rng make_rng(std::uint64_t root, std::string_view component) {
  return Rng(derive_seed(root, component));
}

}  // namespace mlsa

#endif  // MLSA_RANDOM_HPP
