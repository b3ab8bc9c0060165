#ifndef TAILFIT_RNG_HPP
#define TAILFIT_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace tailfit {

// Deterministic seed derivation.  Every stochastic stage derives its own
// 64-bit seed from (master seed, field name, stage tag, replicate index) so
// that results do not depend on scheduling or on other fields in the run.

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t state = a ^ (0x9e3779b97f4a7c15ULL + (b << 6) + (b >> 2));
  std::uint64_t out = splitmix64(state);
  state ^= b;
  return out ^ splitmix64(state);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::string_view tag) {
  return mix_seed(a, fnv1a64(tag));
}

inline std::uint64_t mix_seed(std::uint64_t a, std::string_view tag, std::uint64_t index) {
  return mix_seed(mix_seed(a, fnv1a64(tag)), index);
}

// mt19937_64 is bit-exact across conforming implementations, which keeps
// reports byte-identical across platforms.
using engine = std::mt19937_64;

inline engine make_engine(std::uint64_t seed) { return engine(seed); }

// Uniform double strictly inside (0, 1).
inline double uniform_open(engine& e) {
  return (static_cast<double>(e() >> 11) + 0.5) * 0x1.0p-53;
}

// Unbiased integer in [0, n).  Lemire's rejection method; avoids modulo bias
// without being implementation-defined like std::uniform_int_distribution.
inline std::uint64_t uniform_below(engine& e, std::uint64_t n) {
  for (;;) {
    std::uint64_t x = e();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    std::uint64_t lo = static_cast<std::uint64_t>(m);
    if (lo >= n || lo >= (-n) % n) return static_cast<std::uint64_t>(m >> 64);
  }
}

}  // namespace tailfit

#endif
