#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace uniprox {

// Deterministic random stream.
//
// Wraps std::mt19937_64 but derives all variates from raw 64-bit draws with
// fixed arithmetic, so a given seed produces the same stream on any standard
// library. Draw order is part of an instance family's definition: the
// constructors document how many draws each field consumes.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller (two uniforms per pair, cached).
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    // Avoid log(0).
    while (u1 <= 0.0) u1 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  Eigen::VectorXd gaussian_vector(Eigen::Index n) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = gaussian();
    return v;
  }

  // Uniform point in the origin-centered ball of the given radius.
  Eigen::VectorXd ball_point(Eigen::Index n, double radius) {
    Eigen::VectorXd dir = gaussian_vector(n);
    const double nrm = dir.norm();
    if (nrm == 0.0) return Eigen::VectorXd::Zero(n);
    const double u = uniform();
    return dir * (radius * std::pow(u, 1.0 / static_cast<double>(n)) / nrm);
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace uniprox
