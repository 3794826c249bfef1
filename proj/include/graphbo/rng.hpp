#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace graphbo {

// splitmix64 step, used to derive independent seed streams from (seed, tag...).
inline std::uint64_t seed_mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t seed_mix(std::uint64_t a, std::uint64_t b) {
  return seed_mix(seed_mix(a) ^ (0x9e3779b97f4a7c15ull + b));
}

inline std::uint64_t seed_mix(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return seed_mix(seed_mix(a, b), c);
}

// mt19937_64 engine with hand-rolled distributions. The std:: distribution
// classes are implementation-defined, so sampling goes through these fixed
// recipes to keep outputs identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // uniform in [0, 1), 53-bit resolution
  double u01() { return (eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

  // uniform integer in [0, n), n >= 1, via rejection on the top bits
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t rem = std::numeric_limits<std::uint64_t>::max() % n;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - rem;
    std::uint64_t x;
    do {
      x = eng_();
    } while (x > limit);
    return x % n;
  }

  int uniform_int(int lo, int hi) {  // inclusive range [lo, hi]
    return lo + static_cast<int>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  // standard normal via polar Box-Muller (deterministic draw order)
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * u01() - 1.0;
      v = 2.0 * u01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = next_below(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  // k distinct indices from [0, n), sampled without replacement
  std::vector<int> sample_without_replacement(int n, int k) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    shuffle(idx);
    idx.resize(static_cast<std::size_t>(k));
    return idx;
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace graphbo
