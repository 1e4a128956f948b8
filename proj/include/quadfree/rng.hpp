#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include <Eigen/Dense>

namespace quadfree {

/// SplitMix64 generator. Satisfies UniformRandomBitGenerator, but the
/// helpers below avoid std distributions so sample streams are identical
/// across standard library implementations.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    // Box-Muller; the second variate is discarded to keep the stream simple.
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  Eigen::VectorXd normal_vector(Eigen::Index n) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  /// Uniform on the unit sphere of R^n (n >= 1).
  Eigen::VectorXd unit_vector(Eigen::Index n) {
    for (;;) {
      Eigen::VectorXd v = normal_vector(n);
      const double nv = v.norm();
      if (nv > 1e-12) return v / nv;
    }
  }

  /// Derive an independent child seed (per-batch streams).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 g(seed ^ (0xd1b54a32d192ed03ULL * (index + 1)));
    return g();
  }

 private:
  std::uint64_t state_;
};

}  // namespace quadfree
