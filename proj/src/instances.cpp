#include "uniprox/instances.hpp"

#include <cmath>
#include <memory>
#include <utility>

#include <Eigen/Dense>

#include "uniprox/bundle.hpp"
#include "uniprox/errors.hpp"
#include "uniprox/simplex.hpp"
#include "uniprox/upb.hpp"
#include "uniprox/log.hpp"
#include <chrono>

namespace uniprox {
namespace instances {

Family family_from_name(const std::string& name) {
  if (name == "PiecewiseLinQuad") return Family::PiecewiseLinQuad;
  if (name == "LassoBall") return Family::LassoBall;
  if (name == "ExpPair") return Family::ExpPair;
  throw BadSpec("unknown instance family: " + name);
}

const char* family_name(Family f) {
  switch (f) {
    case Family::PiecewiseLinQuad: return "PiecewiseLinQuad";
    case Family::LassoBall: return "LassoBall";
    case Family::ExpPair: return "ExpPair";
  }
  return "?";
}

namespace {

void check_meta(const HcoInstance& inst) {
  const InstanceMeta& m = inst.meta;
  if (m.mu_h > m.mu_phi + 1e-12) throw BadSpec("instance metadata: mu_h exceeds mu_phi");
  if (m.phi_star && m.x_star) {
    const double v = inst.phi(*m.x_star);
    if (std::abs(v - *m.phi_star) > 1e-9 * (1.0 + std::abs(*m.phi_star)))
      throw BadSpec("instance metadata: phi(x_star) does not match phi_star");
  }
}

}  // namespace

HcoInstance make_piecewise_lin_quad(const Eigen::MatrixXd& slopes,
                                    const Eigen::VectorXd& offsets, double l, double mu_h,
                                    double radius) {
  if (slopes.cols() == 0 || slopes.cols() != offsets.size())
    throw BadSpec("piecewise model needs matching slopes and offsets");
  if (!(radius > 0.0)) throw BadSpec("radius must be positive");

  auto data = std::make_shared<std::pair<Eigen::MatrixXd, Eigen::VectorXd>>(slopes, offsets);
  const double smooth = l;

  HcoInstance inst;
  inst.meta.n = slopes.rows();
  inst.meta.m_f = slopes.colwise().norm().maxCoeff();
  inst.meta.l_f = smooth;
  inst.meta.mu_h = mu_h;
  inst.meta.mu_phi = smooth + mu_h;
  inst.meta.diameter = 2.0 * radius;

  inst.f_value = [data, smooth](const Eigen::VectorXd& x) {
    const Eigen::VectorXd vals = data->first.transpose() * x + data->second;
    return vals.maxCoeff() + 0.5 * smooth * x.squaredNorm();
  };
  inst.f_subgrad = [data, smooth](const Eigen::VectorXd& x) {
    const Eigen::VectorXd vals = data->first.transpose() * x + data->second;
    const double top = vals.maxCoeff();
    std::vector<Eigen::Index> active;
    for (Eigen::Index i = 0; i < vals.size(); ++i)
      if (vals[i] == top) active.push_back(i);
    if (active.size() == 1) return Eigen::VectorXd(data->first.col(active[0]) + smooth * x);
    // Kink: return the minimum-norm subgradient for a reproducible selection.
    Eigen::MatrixXd hull(data->first.rows(), static_cast<Eigen::Index>(active.size()));
    for (std::size_t i = 0; i < active.size(); ++i)
      hull.col(static_cast<Eigen::Index>(i)) = data->first.col(active[i]);
    const Eigen::VectorXd shift = smooth * x;
    const Eigen::VectorXd w = min_norm_hull_weights(hull, shift);
    return Eigen::VectorXd(hull * w + shift);
  };
  inst.h = std::make_shared<QuadBallTerm>(mu_h, radius);
  inst.sample_feasible = [n = inst.meta.n, radius](RandomStream& rng) {
    return rng.ball_point(n, radius);
  };
  return inst;
}

HcoInstance make_exp_pair(double alpha, double halfwidth) {
  if (!(alpha > 0.0) || !(halfwidth > 0.0)) throw BadSpec("ExpPair needs alpha, interval > 0");

  HcoInstance inst;
  inst.meta.n = 1;
  inst.meta.m_f = 0.0;
  inst.meta.l_f = alpha * std::exp(halfwidth);
  inst.meta.mu_h = alpha * std::exp(-halfwidth);
  inst.meta.mu_phi = 2.0 * alpha;
  inst.meta.phi_star = 2.0 * alpha;
  inst.meta.x_star = Eigen::VectorXd::Zero(1);
  inst.meta.diameter = 2.0 * halfwidth;

  inst.f_value = [alpha](const Eigen::VectorXd& x) { return alpha * std::exp(x[0]); };
  inst.f_subgrad = [alpha](const Eigen::VectorXd& x) {
    Eigen::VectorXd g(1);
    g[0] = alpha * std::exp(x[0]);
    return g;
  };
  inst.h = std::make_shared<ExpIntervalTerm>(alpha, halfwidth);
  inst.sample_feasible = [halfwidth](RandomStream& rng) {
    Eigen::VectorXd u(1);
    u[0] = rng.uniform(-halfwidth, halfwidth);
    return u;
  };
  check_meta(inst);
  return inst;
}

HcoInstance make_lasso_ball(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double rho,
                            double radius, double lam_min, double lam_max,
                            bool solve_reference) {
  if (a.rows() != b.size()) throw BadSpec("lasso: A rows must match b");
  if (!(rho >= 0.0) || !(radius > 0.0)) throw BadSpec("lasso: need rho >= 0, radius > 0");

  auto data = std::make_shared<std::pair<Eigen::MatrixXd, Eigen::VectorXd>>(a, b);
  const Eigen::Index n = a.cols();

  HcoInstance inst;
  inst.meta.n = n;
  inst.meta.m_f = rho * std::sqrt(static_cast<double>(n));
  inst.meta.l_f = lam_max;
  inst.meta.mu_h = 0.0;
  inst.meta.mu_phi = lam_min;
  inst.meta.diameter = 2.0 * radius;

  inst.f_value = [data, rho](const Eigen::VectorXd& x) {
    return 0.5 * (data->first * x - data->second).squaredNorm() + rho * x.lpNorm<1>();
  };
  inst.f_subgrad = [data, rho](const Eigen::VectorXd& x) {
    Eigen::VectorXd g = data->first.transpose() * (data->first * x - data->second);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (x[i] > 0.0) {
        g[i] += rho;
      } else if (x[i] < 0.0) {
        g[i] -= rho;
      } else if (g[i] > rho) {
        g[i] -= rho;  // minimum-norm element at the kink
      } else if (g[i] < -rho) {
        g[i] += rho;
      } else {
        g[i] = 0.0;
      }
    }
    return g;
  };
  inst.h = std::make_shared<QuadBallTerm>(0.0, radius);
  inst.sample_feasible = [n, radius](RandomStream& rng) { return rng.ball_point(n, radius); };

  if (solve_reference) {
    auto [phi_star, x_star] = reference_solve(inst, 1e-9);
    if (x_star.norm() > 0.9 * radius)
      throw BadSpec("lasso: optimum not interior to the ball; enlarge the radius");
    inst.meta.phi_star = phi_star;
    inst.meta.x_star = std::move(x_star);
    check_meta(inst);
  }
  return inst;
}

HcoInstance make_instance(const FamilySpec& spec) {
  RandomStream rng(spec.seed);
  switch (spec.family) {
    case Family::PiecewiseLinQuad: {
      if (spec.n < 1 || spec.cuts < 2) throw BadSpec("PiecewiseLinQuad: need n >= 1, cuts >= 2");
      const bool sharp = spec.l == 0.0 && spec.mu_h == 0.0;
      if (sharp && spec.cuts < 2 * spec.n)
        throw BadSpec("PiecewiseLinQuad: a sharp instance needs cuts >= 2n");
      // Symmetric slope pairs with a common top offset keep the optimum at
      // the origin with value zero: zero lies in the hull of the active
      // slopes and both quadratic terms vanish there.
      const int pairs = spec.cuts / 2;
      Eigen::MatrixXd slopes(spec.n, 2 * pairs);
      Eigen::VectorXd offsets(2 * pairs);
      for (int p = 0; p < pairs; ++p) {
        Eigen::VectorXd dir = rng.gaussian_vector(spec.n);
        dir *= rng.uniform(0.4, 1.0) / std::max(dir.norm(), 1e-12);
        const double off = (sharp || p == 0) ? 0.0 : -rng.uniform(0.0, 0.5);
        slopes.col(2 * p) = dir;
        slopes.col(2 * p + 1) = -dir;
        offsets[2 * p] = off;
        offsets[2 * p + 1] = off;
      }
      HcoInstance inst =
          make_piecewise_lin_quad(slopes, offsets, spec.l, spec.mu_h, spec.radius);
      inst.meta.phi_star = 0.0;
      inst.meta.x_star = Eigen::VectorXd::Zero(spec.n);
      check_meta(inst);
      return inst;
    }
    case Family::LassoBall: {
      if (spec.m < spec.n || spec.n < 1) throw BadSpec("LassoBall: need m >= n >= 1");
      // A = U diag(sv) V^T with orthonormal factors, so the extreme singular
      // values (and with them l_f and mu_phi) are exact by construction.
      Eigen::VectorXd sv(spec.n);
      for (Eigen::Index i = 0; i < spec.n; ++i) sv[i] = rng.uniform(0.7, 1.5);
      sv[0] = 0.7;
      if (spec.n > 1) sv[spec.n - 1] = 1.5;
      Eigen::MatrixXd gu(spec.m, spec.n);
      for (Eigen::Index j = 0; j < spec.n; ++j) gu.col(j) = rng.gaussian_vector(spec.m);
      Eigen::MatrixXd gv(spec.n, spec.n);
      for (Eigen::Index j = 0; j < spec.n; ++j) gv.col(j) = rng.gaussian_vector(spec.n);
      const Eigen::MatrixXd qu =
          Eigen::HouseholderQR<Eigen::MatrixXd>(gu).householderQ() *
          Eigen::MatrixXd::Identity(spec.m, spec.n);
      const Eigen::MatrixXd qv =
          Eigen::HouseholderQR<Eigen::MatrixXd>(gv).householderQ() *
          Eigen::MatrixXd::Identity(spec.n, spec.n);
      const Eigen::MatrixXd a = qu * sv.asDiagonal() * qv.transpose();

      Eigen::VectorXd x_true = Eigen::VectorXd::Zero(spec.n);
      const Eigen::Index nz = std::max<Eigen::Index>(1, spec.n / 4);
      for (Eigen::Index i = 0; i < nz; ++i) {
        const auto idx = static_cast<Eigen::Index>(rng.next_u64() % static_cast<std::uint64_t>(spec.n));
        x_true[idx] = rng.uniform(-1.0, 1.0);
      }
      if (x_true.norm() > 0.25 * spec.radius) x_true *= 0.25 * spec.radius / x_true.norm();
      const Eigen::VectorXd b = a * x_true + 0.01 * rng.gaussian_vector(spec.m);

      const double smin = sv.minCoeff();
      const double smax = sv.maxCoeff();
      return make_lasso_ball(a, b, spec.rho, spec.radius, smin * smin, smax * smax);
    }
    case Family::ExpPair:
      return make_exp_pair(spec.alpha, spec.interval);
  }
  throw BadSpec("unhandled family");
}

Eigen::VectorXd default_start(const HcoInstance& inst, const FamilySpec& spec) {
  RandomStream rng(spec.seed ^ 0x9E3779B97F4A7C15ULL);
  if (spec.family == Family::ExpPair) {
    Eigen::VectorXd x0(1);
    x0[0] = 0.5 * spec.interval;
    return x0;
  }
  Eigen::VectorXd dir = rng.gaussian_vector(inst.meta.n);
  const double nrm = std::max(dir.norm(), 1e-12);
  return dir * (0.5 * spec.radius / nrm);
}

std::pair<double, Eigen::VectorXd> reference_solve(const HcoInstance& inst, double tol) {
  if (!(tol > 0.0)) throw DomainError("reference_solve: tol must be positive");

  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(inst.meta.n);
  if (!inst.h->feasible(x0)) {
    RandomStream rng(0);
    x0 = inst.sample_feasible(rng);
  }

  // Budgeted bundle warm start at a tenth of the target accuracy. The budget
  // is capped well under 1e6: the polish below supplies the accuracy, and
  // longer warm starts add nothing measurable.
  SolverConfig cfg;
  cfg.chi = 0.0;
  cfg.lambda0 = 1.0;
  cfg.epsbar = tol / 10.0;
  cfg.nbar = 80;
  cfg.budget_inner = 400;
  cfg.termination = Termination::BudgetOnly;
  cfg.tol_inner = 1e-12;
  cfg.policy.scheme = BundleScheme::MultiCuts;
  cfg.policy.max_cuts = 30;
  cfg.policy.reset_model = ModelReset::KeepActive;
  const auto tw0 = std::chrono::steady_clock::now();
  RunResult warm = upb_solve(inst, x0, cfg);
  log_debug("reference warm: %.2fs, %ld iters, best=%.12g",
            std::chrono::duration<double>(std::chrono::steady_clock::now() - tw0).count(),
            warm.iterations_inner, warm.best_value);
  if (warm.status == RunStatus::Error)
    throw NonConvergence("reference_solve: warm-start solve failed: " + warm.error_message);

  Eigen::VectorXd x = warm.best_point;
  double best_val = warm.best_value;
  Eigen::VectorXd best_x = x;

  // Proximal fixed-point polish: repeatedly minimize phi + ||.-x||^2/(2 lam)
  // to high accuracy via a cutting-plane loop and move x to the solution.
  const double mu = inst.meta.mu_phi;
  const double lam = mu > 0.0 ? 50.0 / mu : 1e3;
  SubproblemOptions opts;
  opts.tol = 1e-13;
  BundlePolicy policy;
  policy.scheme = BundleScheme::MultiCuts;
  policy.max_cuts = 160;
  policy.reset_model = ModelReset::KeepActive;

  int stagnant = 0;
  for (int round = 0; round < 40; ++round) {
    const auto tr0 = std::chrono::steady_clock::now();
    const double prev_best = best_val;
    CutModel model{inst.linearize_f(x)};
    SubproblemSolution sol;
    double bar = std::numeric_limits<double>::infinity();
    const double delta = std::max(1e-4 * tol, 1e-15 * (1.0 + std::abs(best_val)));
    for (int it = 0; it < 1200; ++it) {
      sol = solve_cut_model(model, inst, x, lam, opts);
      const double phi_x = inst.phi(sol.x);
      bar = std::min(bar, phi_x + (sol.x - x).squaredNorm() / (2.0 * lam));
      if (phi_x < best_val) {
        best_val = phi_x;
        best_x = sol.x;
      }
      if (bar - sol.objective_value <= delta) break;
      model = bu_multi_cuts(model, sol, inst.linearize_f(sol.x), policy);
    }
    const double moved = (sol.x - x).norm();
    x = sol.x;
    log_debug("reference polish round %d: %.2fs cuts=%zu moved=%.3e best=%.12g", round,
              std::chrono::duration<double>(std::chrono::steady_clock::now() - tr0).count(),
              model.size(), moved, best_val);
    stagnant = best_val < prev_best - 1e-15 * (1.0 + std::abs(best_val)) ? 0 : stagnant + 1;
    if (round >= 4 && (moved <= 1e-12 * (1.0 + x.norm()) || stagnant >= 4)) break;
  }
  const double phi_final = inst.phi(x);
  if (phi_final < best_val) {
    best_val = phi_final;
    best_x = x;
  }
  return {best_val, best_x};
}

}  // namespace instances
}  // namespace uniprox
