#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "uniprox/cut.hpp"
#include "uniprox/rng.hpp"

namespace uniprox {

// Exact constants attached to a hybrid composite instance phi = f + h.
//
//   m_f, l_f   hybrid (non)smoothness constants of the f-oracle
//   mu_phi     intrinsic convexity of phi (largest mu with phi - mu/2|.|^2 convex)
//   mu_h       intrinsic convexity of h
//   phi_star   optimal value, when the family knows it
//   x_star     optimal solution nearest to the conventional start point
//   diameter   bound on the diameter of dom h, when finite
struct InstanceMeta {
  Eigen::Index n = 0;
  double m_f = 0.0;
  double l_f = 0.0;
  double mu_phi = 0.0;
  double mu_h = 0.0;
  std::optional<double> phi_star;
  std::optional<Eigen::VectorXd> x_star;
  std::optional<double> diameter;
};

// Prox-capable composite term h.
//
// Extended values are handled through the feasibility predicate and by the
// prox itself, which always returns a point in dom h; value() may return +inf
// outside the domain but the solvers never query it there.
class ProxTerm {
 public:
  virtual ~ProxTerm() = default;

  virtual double value(const Eigen::VectorXd& u) const = 0;
  virtual bool feasible(const Eigen::VectorXd& u) const = 0;

  // argmin_u  <tilt, u> + h(u) + ||u - center||^2 / (2 lam),  lam > 0.
  virtual Eigen::VectorXd prox_tilted(const Eigen::VectorXd& tilt,
                                      const Eigen::VectorXd& center,
                                      double lam) const = 0;

  // Directional derivative of prox_tilted with respect to the tilt
  // (one-sided at regime boundaries). Exact; the dual solver's Newton
  // iteration depends on it to certify gaps at machine precision.
  virtual Eigen::VectorXd prox_tilted_jvp(const Eigen::VectorXd& tilt,
                                          const Eigen::VectorXd& center, double lam,
                                          const Eigen::VectorXd& dtilt) const = 0;

  // Strong convexity modulus of h.
  virtual double mu() const = 0;
};

// h == 0.
class ZeroTerm final : public ProxTerm {
 public:
  double value(const Eigen::VectorXd&) const override { return 0.0; }
  bool feasible(const Eigen::VectorXd&) const override { return true; }
  Eigen::VectorXd prox_tilted(const Eigen::VectorXd& tilt, const Eigen::VectorXd& center,
                              double lam) const override {
    return center - lam * tilt;
  }
  Eigen::VectorXd prox_tilted_jvp(const Eigen::VectorXd&, const Eigen::VectorXd&, double lam,
                                  const Eigen::VectorXd& dtilt) const override {
    return -lam * dtilt;
  }
  double mu() const override { return 0.0; }
};

// h(u) = mu/2 ||u||^2 + indicator of the origin-centered ball of given radius
// (radius may be +inf). Covers the plain ball indicator (mu = 0) and the
// plain quadratic (radius = inf).
class QuadBallTerm final : public ProxTerm {
 public:
  QuadBallTerm(double mu, double radius) : mu_(mu), radius_(radius) {}

  double value(const Eigen::VectorXd& u) const override {
    if (!feasible(u)) return std::numeric_limits<double>::infinity();
    return 0.5 * mu_ * u.squaredNorm();
  }

  bool feasible(const Eigen::VectorXd& u) const override {
    return u.norm() <= radius_ * (1.0 + 1e-12) + 1e-300;
  }

  Eigen::VectorXd prox_tilted(const Eigen::VectorXd& tilt, const Eigen::VectorXd& center,
                              double lam) const override {
    // Objective is (mu + 1/lam)/2 ||u||^2 + <tilt - center/lam, u> + const,
    // so the constrained minimizer is the ball projection of the free one.
    Eigen::VectorXd u = (center - lam * tilt) / (1.0 + lam * mu_);
    const double nrm = u.norm();
    if (nrm > radius_) u *= radius_ / nrm;
    return u;
  }

  Eigen::VectorXd prox_tilted_jvp(const Eigen::VectorXd& tilt, const Eigen::VectorXd& center,
                                  double lam, const Eigen::VectorXd& dtilt) const override {
    const Eigen::VectorXd free = (center - lam * tilt) / (1.0 + lam * mu_);
    const Eigen::VectorXd dfree = -lam / (1.0 + lam * mu_) * dtilt;
    const double nrm = free.norm();
    if (nrm <= radius_) return dfree;
    // Sphere projection: scale and remove the radial component.
    return radius_ / nrm * (dfree - free * (free.dot(dfree) / (nrm * nrm)));
  }

  double mu() const override { return mu_; }
  double radius() const { return radius_; }

 private:
  double mu_;
  double radius_;
};

// One-dimensional h(u) = alpha exp(-u) + indicator of [-r, r].
// The tilted prox has no closed form; it is solved by safeguarded Newton with
// a bisection fallback to residual 1e-12, well below every checker tolerance.
class ExpIntervalTerm final : public ProxTerm {
 public:
  ExpIntervalTerm(double alpha, double halfwidth) : alpha_(alpha), halfwidth_(halfwidth) {}

  double value(const Eigen::VectorXd& u) const override;
  bool feasible(const Eigen::VectorXd& u) const override;
  Eigen::VectorXd prox_tilted(const Eigen::VectorXd& tilt, const Eigen::VectorXd& center,
                              double lam) const override;
  Eigen::VectorXd prox_tilted_jvp(const Eigen::VectorXd& tilt, const Eigen::VectorXd& center,
                                  double lam, const Eigen::VectorXd& dtilt) const override;

  // Infimum of h'' over the interval.
  double mu() const override { return alpha_ * std::exp(-halfwidth_); }

  double alpha() const { return alpha_; }
  double halfwidth() const { return halfwidth_; }

 private:
  double alpha_;
  double halfwidth_;
};

// First-order oracle for f, tilted prox oracle for h, and exact metadata.
// Immutable after construction; every member is a pure function, so instances
// are safe to share across concurrent solves.
struct HcoInstance {
  InstanceMeta meta;
  std::function<double(const Eigen::VectorXd&)> f_value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> f_subgrad;
  std::shared_ptr<const ProxTerm> h;
  // Uniform-ish sampler over dom h, used by sampled checks.
  std::function<Eigen::VectorXd(RandomStream&)> sample_feasible;

  double h_value(const Eigen::VectorXd& u) const { return h->value(u); }
  double phi(const Eigen::VectorXd& u) const { return f_value(u) + h->value(u); }
  Cut linearize_f(const Eigen::VectorXd& x) const {
    return linearize(x, f_value(x), f_subgrad(x));
  }
};

inline double eval_f(const HcoInstance& inst, const Eigen::VectorXd& x) {
  return inst.f_value(x);
}

inline Eigen::VectorXd subgrad_f(const HcoInstance& inst, const Eigen::VectorXd& x) {
  return inst.f_subgrad(x);
}

// argmin_u <g, u> + h(u) + ||u - c||^2 / (2 lam).
Eigen::VectorXd prox_tilted_h(const HcoInstance& inst, const Eigen::VectorXd& g,
                              const Eigen::VectorXd& c, double lam);

}  // namespace uniprox
