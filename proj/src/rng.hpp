#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace coflow {

// splitmix64 finalizer, used both as a hash and as the seed-tree combiner.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ (0x9e3779b97f4a7c15ULL + (b << 6) + (b >> 2)));
}

// Derives a child seed from a root and a path of ids, e.g.
// chain_seed(global, {instance, replication, kStreamRealization}).
inline std::uint64_t chain_seed(std::uint64_t root,
                                std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = splitmix64(root);
  for (std::uint64_t id : path) s = mix_seed(s, id);
  return s;
}

// Stream tags for the seed tree. Adding a policy or a consumer must never
// perturb the draws of existing ones, so every consumer gets its own tag.
enum : std::uint64_t {
  kStreamRealization = 0x52454131,
  kStreamRandomOrder = 0x524f5244,
  kStreamStructure = 0x53545255,
  kStreamAlpha = 0x414c5048,
  kStreamInstance = 0x494e5354,
};

// Deterministic uniform engine. All sampling in this project goes through
// this class; std::*_distribution is avoided because its output is
// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Uniform in (0, 1), for inverse-CDF transforms that reject 0.
  double uniform_pos() {
    double u;
    do {
      u = uniform();
    } while (u <= 0.0);
    return u;
  }

  // Uniform integer in [0, n), rejection sampled for exact uniformity.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % n;
  }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace coflow
