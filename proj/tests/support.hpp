#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <utility>

#include <Eigen/Core>

#include "uniprox/cut.hpp"
#include "uniprox/instances.hpp"
#include "uniprox/oracle.hpp"
#include "uniprox/rng.hpp"

namespace testsupport {

using Eigen::VectorXd;

struct GridResult {
  VectorXd arg;
  double value = std::numeric_limits<double>::infinity();
};

// Brute-force minimization over a regular grid. Infeasible points (objective
// +inf) are skipped. Independent of the dual subproblem solver by design.
inline GridResult grid_min_1d(const std::function<double(const VectorXd&)>& f, double lo,
                              double hi, double step) {
  GridResult best;
  VectorXd u(1);
  const long count = static_cast<long>(std::floor((hi - lo) / step)) + 1;
  for (long i = 0; i < count; ++i) {
    u[0] = lo + static_cast<double>(i) * step;
    const double v = f(u);
    if (v < best.value) {
      best.value = v;
      best.arg = u;
    }
  }
  return best;
}

inline GridResult grid_min_2d(const std::function<double(const VectorXd&)>& f, double lo0,
                              double hi0, double lo1, double hi1, double step) {
  GridResult best;
  VectorXd u(2);
  const long c0 = static_cast<long>(std::floor((hi0 - lo0) / step)) + 1;
  const long c1 = static_cast<long>(std::floor((hi1 - lo1) / step)) + 1;
  for (long i = 0; i < c0; ++i) {
    u[0] = lo0 + static_cast<double>(i) * step;
    for (long j = 0; j < c1; ++j) {
      u[1] = lo1 + static_cast<double>(j) * step;
      const double v = f(u);
      if (v < best.value) {
        best.value = v;
        best.arg = u;
      }
    }
  }
  return best;
}

inline VectorXd vec1(double a) {
  VectorXd v(1);
  v << a;
  return v;
}

inline VectorXd vec2(double a, double b) {
  VectorXd v(2);
  v << a, b;
  return v;
}

// Instance with f(x) = c/2 ||x||^2 and a chosen composite term; metadata
// filled exactly. Handy for closed-form checks.
inline uniprox::HcoInstance quadratic_instance(double c, std::shared_ptr<uniprox::ProxTerm> h,
                                               Eigen::Index n, double mu_h) {
  uniprox::HcoInstance inst;
  inst.meta.n = n;
  inst.meta.m_f = 0.0;
  inst.meta.l_f = c;
  inst.meta.mu_h = mu_h;
  inst.meta.mu_phi = c + mu_h;
  inst.meta.phi_star = 0.0;
  inst.meta.x_star = VectorXd::Zero(n);
  inst.f_value = [c](const VectorXd& x) { return 0.5 * c * x.squaredNorm(); };
  inst.f_subgrad = [c](const VectorXd& x) { return VectorXd(c * x); };
  inst.h = std::move(h);
  inst.sample_feasible = [n](uniprox::RandomStream& rng) { return rng.gaussian_vector(n); };
  return inst;
}

// 1-D f(x) = |x| with h = 0.
inline uniprox::HcoInstance abs_instance() {
  uniprox::HcoInstance inst;
  inst.meta.n = 1;
  inst.meta.m_f = 1.0;
  inst.meta.l_f = 0.0;
  inst.meta.mu_h = 0.0;
  inst.meta.mu_phi = 0.0;
  inst.meta.phi_star = 0.0;
  inst.meta.x_star = VectorXd::Zero(1);
  inst.f_value = [](const VectorXd& x) { return std::abs(x[0]); };
  inst.f_subgrad = [](const VectorXd& x) {
    VectorXd g(1);
    g[0] = x[0] > 0.0 ? 1.0 : (x[0] < 0.0 ? -1.0 : 0.0);
    return g;
  };
  inst.h = std::make_shared<uniprox::ZeroTerm>();
  inst.sample_feasible = [](uniprox::RandomStream& rng) { return vec1(rng.uniform(-3.0, 3.0)); };
  return inst;
}

}  // namespace testsupport
