#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "uniprox/errors.hpp"
#include "uniprox/instances.hpp"
#include "uniprox/oracle.hpp"

using namespace uniprox;
using testsupport::vec1;
using testsupport::vec2;
using Eigen::VectorXd;

TEST_CASE("eval_f closed forms") {
  auto quad = testsupport::quadratic_instance(1.0, std::make_shared<ZeroTerm>(), 1, 0.0);
  CHECK(eval_f(quad, vec1(2.0)) == doctest::Approx(2.0));

  auto abs = testsupport::abs_instance();
  CHECK(eval_f(abs, vec1(0.0)) == doctest::Approx(0.0));

  // Lasso at zero: only the residual term survives.
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2, 2);
  auto lasso = instances::make_lasso_ball(a, vec2(1.0, 2.0), 0.5, 10.0, 1.0, 1.0, false);
  CHECK(eval_f(lasso, vec2(0.0, 0.0)) == doctest::Approx(0.5 * 5.0));
}

TEST_CASE("subgrad_f selections") {
  auto quad = testsupport::quadratic_instance(1.0, std::make_shared<ZeroTerm>(), 1, 0.0);
  CHECK(subgrad_f(quad, vec1(3.0))[0] == doctest::Approx(3.0));

  // Kink of |x| at zero: minimum-norm selection is zero.
  Eigen::MatrixXd slopes(1, 2);
  slopes << 1.0, -1.0;
  auto pl = instances::make_piecewise_lin_quad(slopes, VectorXd::Zero(2), 0.0, 0.0, 10.0);
  CHECK(subgrad_f(pl, vec1(0.0))[0] == doctest::Approx(0.0));
  // Away from the kink the active piece decides.
  CHECK(subgrad_f(pl, vec1(2.0))[0] == doctest::Approx(1.0));
  CHECK(subgrad_f(pl, vec1(-2.0))[0] == doctest::Approx(-1.0));
}

TEST_CASE("prox_tilted_h closed forms") {
  VectorXd g = vec2(0.5, -1.0);
  VectorXd c = vec2(1.0, 2.0);

  HcoInstance zero = testsupport::quadratic_instance(0.0, std::make_shared<ZeroTerm>(), 2, 0.0);
  CHECK((prox_tilted_h(zero, g, c, 2.0) - (c - 2.0 * g)).norm() == doctest::Approx(0.0));

  HcoInstance ball =
      testsupport::quadratic_instance(0.0, std::make_shared<QuadBallTerm>(0.0, 1.0), 2, 0.0);
  VectorXd proj = prox_tilted_h(ball, VectorXd::Zero(2), vec2(2.0, 0.0), 1.0);
  CHECK(proj[0] == doctest::Approx(1.0));
  CHECK(proj[1] == doctest::Approx(0.0));

  const double mu = 0.7;
  HcoInstance quad = testsupport::quadratic_instance(
      0.0, std::make_shared<QuadBallTerm>(mu, 1e18), 2, mu);
  VectorXd u = prox_tilted_h(quad, g, c, 3.0);
  CHECK((u - (c - 3.0 * g) / (1.0 + 3.0 * mu)).norm() == doctest::Approx(0.0).epsilon(1e-14));

  CHECK_THROWS_AS(prox_tilted_h(zero, g, c, 0.0), DomainError);
}

TEST_CASE("exp-interval prox stationarity") {
  const double alpha = 1.3, r = 2.0;
  ExpIntervalTerm h(alpha, r);
  RandomStream rng(7);
  for (int i = 0; i < 300; ++i) {
    VectorXd g = vec1(rng.uniform(-2.0, 2.0));
    VectorXd c = vec1(rng.uniform(-3.0, 3.0));
    const double lam = std::exp(rng.uniform(-4.0, 1.5));
    VectorXd u = h.prox_tilted(g, c, lam);
    CHECK(h.feasible(u));
    if (std::abs(u[0]) < r * (1.0 - 1e-9)) {
      const double resid = g[0] - alpha * std::exp(-u[0]) + (u[0] - c[0]) / lam;
      CHECK(std::abs(resid) <= 1e-10 * (1.0 + c.norm()));
    } else {
      // Boundary solution: the derivative pushes outward.
      const double d = g[0] - alpha * std::exp(-u[0]) + (u[0] - c[0]) / lam;
      CHECK((u[0] > 0 ? d <= 1e-10 : d >= -1e-10));
    }
  }
}

TEST_CASE("prox returns the exact minimizer under perturbation") {
  RandomStream rng(8);
  std::vector<std::shared_ptr<ProxTerm>> terms = {
      std::make_shared<ZeroTerm>(), std::make_shared<QuadBallTerm>(0.5, 2.0),
      std::make_shared<QuadBallTerm>(0.0, 1.5)};
  for (const auto& h : terms) {
    for (int trial = 0; trial < 40; ++trial) {
      VectorXd g = rng.gaussian_vector(2);
      VectorXd c = rng.gaussian_vector(2);
      const double lam = std::exp(rng.uniform(-2.0, 1.0));
      VectorXd u = h->prox_tilted(g, c, lam);
      CHECK(h->feasible(u));
      auto objective = [&](const VectorXd& v) {
        return g.dot(v) + h->value(v) + (v - c).squaredNorm() / (2.0 * lam);
      };
      const double base = objective(u);
      for (int p = 0; p < 100; ++p) {
        VectorXd d = rng.gaussian_vector(2);
        d *= 1e-3 / d.norm();
        const double perturbed = objective(u + d);
        if (std::isfinite(perturbed)) CHECK(base <= perturbed + 1e-12);
      }
    }
  }
  // 1-D exp-family term.
  ExpIntervalTerm he(0.8, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    VectorXd g = vec1(rng.uniform(-2.0, 2.0));
    VectorXd c = vec1(rng.uniform(-3.0, 3.0));
    const double lam = std::exp(rng.uniform(-2.0, 1.0));
    VectorXd u = he.prox_tilted(g, c, lam);
    auto objective = [&](const VectorXd& v) {
      return g.dot(v) + he.value(v) + (v - c).squaredNorm() / (2.0 * lam);
    };
    const double base = objective(u);
    for (int p = 0; p < 100; ++p) {
      VectorXd d = vec1((rng.uniform() < 0.5 ? -1.0 : 1.0) * 1e-3);
      const double perturbed = objective(u + d);
      if (std::isfinite(perturbed)) CHECK(base <= perturbed + 1e-12);
    }
  }
}

TEST_CASE("sampled subgradient inequality and hybrid bound") {
  std::vector<instances::FamilySpec> specs(3);
  specs[0].family = instances::Family::PiecewiseLinQuad;
  specs[0].n = 3;
  specs[0].cuts = 8;
  specs[0].l = 0.5;
  specs[0].mu_h = 0.3;
  specs[0].radius = 5.0;
  specs[0].seed = 21;
  specs[1].family = instances::Family::LassoBall;
  specs[1].n = 4;
  specs[1].m = 6;
  specs[1].rho = 0.2;
  specs[1].radius = 10.0;
  specs[1].seed = 22;
  specs[2].family = instances::Family::ExpPair;
  specs[2].alpha = 1.1;
  specs[2].interval = 1.5;
  specs[2].seed = 23;

  for (const auto& spec : specs) {
    HcoInstance inst = instances::make_instance(spec);
    RandomStream rng(spec.seed + 100);
    for (int i = 0; i < 1000; ++i) {
      const VectorXd x = inst.sample_feasible(rng);
      const VectorXd u = inst.sample_feasible(rng);
      const VectorXd g = inst.f_subgrad(x);
      // Subgradient inequality.
      CHECK(inst.f_value(u) >= inst.f_value(x) + g.dot(u - x) - 1e-9);
      // Hybrid upper bound on the linearization error.
      const double lin_err = inst.f_value(x) - (inst.f_value(u) + inst.f_subgrad(u).dot(x - u));
      const double r = (x - u).norm();
      CHECK(lin_err <= 2.0 * inst.meta.m_f * r + 0.5 * inst.meta.l_f * r * r + 1e-9);
      // Prox feasibility.
      const VectorXd p = prox_tilted_h(inst, g, x, 0.37);
      CHECK(inst.h->feasible(p));
    }
  }
}
