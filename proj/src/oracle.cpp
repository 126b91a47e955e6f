#include "uniprox/oracle.hpp"

#include <cmath>

#include "uniprox/errors.hpp"

namespace uniprox {

double ExpIntervalTerm::value(const Eigen::VectorXd& u) const {
  if (!feasible(u)) return std::numeric_limits<double>::infinity();
  return alpha_ * std::exp(-u[0]);
}

bool ExpIntervalTerm::feasible(const Eigen::VectorXd& u) const {
  return u.size() == 1 && std::abs(u[0]) <= halfwidth_ * (1.0 + 1e-12);
}

Eigen::VectorXd ExpIntervalTerm::prox_tilted(const Eigen::VectorXd& tilt,
                                             const Eigen::VectorXd& center,
                                             double lam) const {
  const double g = tilt[0];
  const double c = center[0];
  // psi(u) = g u + alpha e^{-u} + (u-c)^2/(2 lam); psi' is strictly increasing,
  // so the interval-constrained minimizer is the clamped root of psi'.
  auto deriv = [&](double u) { return g - alpha_ * std::exp(-u) + (u - c) / lam; };

  double lo = -halfwidth_;
  double hi = halfwidth_;
  const double dlo = deriv(lo);
  const double dhi = deriv(hi);
  Eigen::VectorXd out(1);
  if (dlo >= 0.0) {
    out[0] = lo;
    return out;
  }
  if (dhi <= 0.0) {
    out[0] = hi;
    return out;
  }

  const double scale = std::abs(g) + alpha_ + (std::abs(c) + halfwidth_) / lam + 1.0;
  const double target = 1e-12 * scale;
  double u = std::min(std::max(c, lo), hi);
  for (int it = 0; it < 200; ++it) {
    const double d = deriv(u);
    if (std::abs(d) <= target) {
      out[0] = u;
      return out;
    }
    if (d > 0.0) {
      hi = u;
    } else {
      lo = u;
    }
    const double dd = alpha_ * std::exp(-u) + 1.0 / lam;
    double step = u - d / dd;
    if (!(step > lo && step < hi)) step = 0.5 * (lo + hi);  // bisection fallback
    u = step;
  }
  throw NonConvergence("exp-family prox: residual target not reached in 200 iterations");
}

Eigen::VectorXd ExpIntervalTerm::prox_tilted_jvp(const Eigen::VectorXd& tilt,
                                                 const Eigen::VectorXd& center, double lam,
                                                 const Eigen::VectorXd& dtilt) const {
  const Eigen::VectorXd u = prox_tilted(tilt, center, lam);
  Eigen::VectorXd d(1);
  if (std::abs(u[0]) >= halfwidth_ * (1.0 - 1e-12)) {
    d[0] = 0.0;  // clamped at the interval boundary
    return d;
  }
  // Implicit differentiation of g - alpha e^{-u} + (u - c)/lam = 0.
  d[0] = -dtilt[0] / (alpha_ * std::exp(-u[0]) + 1.0 / lam);
  return d;
}

Eigen::VectorXd prox_tilted_h(const HcoInstance& inst, const Eigen::VectorXd& g,
                              const Eigen::VectorXd& c, double lam) {
  if (!(lam > 0.0)) throw DomainError("prox_tilted_h: stepsize must be positive");
  return inst.h->prox_tilted(g, c, lam);
}

}  // namespace uniprox
