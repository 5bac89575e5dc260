#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string_view>

namespace bosegas {

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

// xoshiro256++ with explicit distribution transforms. All draws are fully
// specified here, so a (seed, label, index) triple reproduces the same
// stream on any platform and at any thread count.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  // Deterministic substream derivation: hash of (seed, label, index).
  static Rng substream(std::uint64_t seed, std::string_view label,
                       std::uint64_t index = 0) {
    std::uint64_t st = seed ^ fnv1a64(label);
    splitmix64(st);
    st += index * 0x9e3779b97f4a7c15ULL;
    return Rng(splitmix64(st));
  }

  std::uint64_t next_u64() {
    auto rotl = [](std::uint64_t x, int k) {
      return (x << k) | (x >> (64 - k));
    };
    std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in (0,1); never returns 0 or 1.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double exponential() { return -std::log(uniform()); }

  // Box-Muller; one value per call, cached pair not kept to stay stateless
  // across substream merges.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Standard complex Gaussian: E|z|^2 = 1, |z|^2 ~ Exp(1).
  std::complex<double> complex_normal() {
    double r = std::sqrt(exponential());
    double phase = 2.0 * 3.14159265358979323846 * uniform();
    return {r * std::cos(phase), r * std::sin(phase)};
  }

  long poisson(double mean);

 private:
  std::uint64_t s_[4];
};

}  // namespace bosegas
