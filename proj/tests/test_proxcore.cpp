#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "uniprox/errors.hpp"
#include "uniprox/oracle.hpp"
#include "uniprox/proxcore.hpp"

using namespace uniprox;
using testsupport::vec1;
using testsupport::vec2;
using Eigen::VectorXd;

namespace {

HcoInstance bare(Eigen::Index n, std::shared_ptr<ProxTerm> h) {
  HcoInstance inst;
  inst.meta.n = n;
  inst.h = std::move(h);
  inst.f_value = [](const VectorXd&) { return 0.0; };
  inst.f_subgrad = [n](const VectorXd&) { return VectorXd::Zero(n); };
  inst.sample_feasible = [n](RandomStream& rng) { return rng.gaussian_vector(n); };
  return inst;
}

void check_solution_invariants(const SubproblemSolution& sol, const CutModel& model,
                               const HcoInstance& inst, const VectorXd& center, double lam) {
  REQUIRE(sol.weights.size() == static_cast<Eigen::Index>(model.size()));
  CHECK(sol.weights.minCoeff() >= 0.0);
  CHECK(std::abs(sol.weights.sum() - 1.0) <= 1e-12);
  // Complementarity.
  for (Eigen::Index i = 0; i < sol.weights.size(); ++i) {
    if (sol.weights[i] > 1e-10)
      CHECK(model.cuts[static_cast<std::size_t>(i)].value(sol.x) >= sol.model_value - 1e-8);
  }
  // Prox consistency of the aggregate.
  const VectorXd re = inst.h->prox_tilted(sol.aggregate.slope, center, lam);
  CHECK((re - sol.x).norm() <= 1e-8 * (1.0 + center.norm()));
  // Aggregate matches the model at the solution.
  CHECK(std::abs(sol.aggregate.value(sol.x) - sol.model_value) <=
        1e-8 * (1.0 + std::abs(sol.model_value)));
  CHECK(sol.inner_gap >= 0.0);
  CHECK(sol.inner_gap <= 1e-10);
}

}  // namespace

TEST_CASE("single cut closed forms") {
  auto inst = bare(1, std::make_shared<ZeroTerm>());
  // Slope-one cut from the origin center.
  SubproblemSolution sol = solve_single_cut(Cut{vec1(1.0), 0.0}, inst, vec1(0.0), 1.0);
  CHECK(sol.x[0] == doctest::Approx(-1.0));
  CHECK(sol.weights.size() == 1);
  CHECK(sol.weights[0] == doctest::Approx(1.0));
  CHECK(sol.inner_gap == 0.0);

  // A zero slope keeps the center.
  sol = solve_single_cut(Cut{vec1(0.0), 0.3}, inst, vec1(0.7), 2.0);
  CHECK(sol.x[0] == doctest::Approx(0.7));

  // Quadratic linearized at 1: slope 1, offset -1/2; minimizer lands at 0.
  sol = solve_single_cut(Cut{vec1(1.0), -0.5}, inst, vec1(1.0), 1.0);
  CHECK(sol.x[0] == doctest::Approx(0.0));
  CHECK(sol.objective_value == doctest::Approx(0.0));
}

TEST_CASE("two-cut kink at the origin") {
  auto inst = bare(1, std::make_shared<ZeroTerm>());
  CutModel model{{Cut{vec1(1.0), 0.0}, Cut{vec1(-1.0), 0.0}}};

  SubproblemSolution sol = solve_cut_model(model, inst, vec1(0.0), 1.0);
  CHECK(std::abs(sol.x[0]) <= 1e-12);
  CHECK(sol.weights[0] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(sol.weights[1] == doctest::Approx(0.5).epsilon(1e-10));
  check_solution_invariants(sol, model, inst, vec1(0.0), 1.0);

  // Off-center prox still lands on the kink; multipliers split 0.65/0.35.
  sol = solve_cut_model(model, inst, vec1(0.3), 1.0);
  CHECK(std::abs(sol.x[0]) <= 1e-12);
  CHECK(sol.weights[0] == doctest::Approx(0.65).epsilon(1e-9));
  CHECK(sol.weights[1] == doctest::Approx(0.35).epsilon(1e-9));
  check_solution_invariants(sol, model, inst, vec1(0.3), 1.0);

  // Grid cross-check of the off-center case.
  auto obj = [&](const VectorXd& u) {
    return model.value(u) + (u - vec1(0.3)).squaredNorm() / 2.0;
  };
  auto grid = testsupport::grid_min_1d(obj, -1.0, 1.0, 1e-4);
  CHECK(std::abs(grid.arg[0] - sol.x[0]) <= 1e-3);
  CHECK(std::abs(grid.value - sol.objective_value) <= 1e-6);

  // Aggregate of the off-center solve: slope 0.3, offset 0.
  const Cut agg = aggregate_cut(sol, model);
  CHECK(agg.slope[0] == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(agg.offset == doctest::Approx(0.0));
}

TEST_CASE("one-cut model reduces to solve_single_cut exactly") {
  auto inst = bare(2, std::make_shared<QuadBallTerm>(0.4, 3.0));
  const Cut cut{vec2(0.7, -0.2), 0.1};
  const VectorXd center = vec2(0.5, 1.0);
  const SubproblemSolution a = solve_single_cut(cut, inst, center, 0.8);
  const SubproblemSolution b = solve_cut_model(CutModel{cut}, inst, center, 0.8);
  CHECK((a.x - b.x).norm() == 0.0);
  CHECK(a.objective_value == b.objective_value);
}

TEST_CASE("random models match grid search") {
  // Model scale is chosen so the grid oracle's own discretization error at a
  // kink minimum (about slope-span times half the spacing) stays below the
  // 1e-6 value tolerance.
  RandomStream rng(31);
  int n_checked = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const bool two_d = trial % 3 == 0;
    const Eigen::Index n = two_d ? 2 : 1;
    std::shared_ptr<ProxTerm> h;
    double mu_h = 0.0;
    switch (trial % 4) {
      case 0: h = std::make_shared<ZeroTerm>(); break;
      case 1: {
        mu_h = rng.uniform(0.1, 2.0);
        h = std::make_shared<QuadBallTerm>(mu_h, 1e18);
        break;
      }
      case 2: h = std::make_shared<QuadBallTerm>(0.0, rng.uniform(0.02, 0.06)); break;
      default: {
        mu_h = rng.uniform(0.2, 1.5);
        h = std::make_shared<QuadBallTerm>(mu_h, rng.uniform(0.02, 0.06));
        break;
      }
    }
    auto inst = bare(n, h);
    const int ncuts = 1 + static_cast<int>(rng.next_u64() % 5);
    std::vector<Cut> cuts;
    for (int i = 0; i < ncuts; ++i)
      cuts.push_back(Cut{0.005 * rng.gaussian_vector(n), rng.uniform(-0.0002, 0.0002)});
    CutModel model{cuts};
    VectorXd center = 0.02 * rng.gaussian_vector(n);
    if (auto* qb = dynamic_cast<const QuadBallTerm*>(h.get());
        qb != nullptr && qb->radius() < 1e17 && center.norm() > 0.6 * qb->radius())
      center *= 0.6 * qb->radius() / center.norm();
    const double lam = two_d ? rng.uniform(0.01, 2.0) : std::exp(rng.uniform(-4.0, 0.7));

    const SubproblemSolution sol = solve_cut_model(model, inst, center, lam);
    check_solution_invariants(sol, model, inst, center, lam);

    auto obj = [&](const VectorXd& u) {
      return model.value(u) + inst.h_value(u) + (u - center).squaredNorm() / (2.0 * lam);
    };
    double maxslope = 0.0;
    for (const Cut& c : cuts) maxslope = std::max(maxslope, c.slope.norm());
    // ||x - c|| <= lam (||s(w)|| + mu ||c||) / (1 + lam mu) for the
    // quadratic-plus-ball term with a feasible center.
    const double reach =
        lam * (maxslope + mu_h * center.norm()) / (1.0 + lam * mu_h) + 3e-4;
    if (two_d) {
      auto grid = testsupport::grid_min_2d(obj, center[0] - reach, center[0] + reach,
                                           center[1] - reach, center[1] + reach, 1e-4);
      CHECK((grid.arg - sol.x).norm() <= 1e-3);
      CHECK(std::abs(grid.value - sol.objective_value) <= 1e-6);
    } else {
      auto grid = testsupport::grid_min_1d(obj, center[0] - reach, center[0] + reach, 1e-4);
      CHECK(std::abs(grid.arg[0] - sol.x[0]) <= 1e-3);
      CHECK(std::abs(grid.value - sol.objective_value) <= 1e-6);
    }
    ++n_checked;
  }
  CHECK(n_checked == 150);
}

TEST_CASE("unit-scale models match grid search up to discretization") {
  RandomStream rng(34);
  for (int trial = 0; trial < 40; ++trial) {
    auto inst = bare(1, trial % 2 == 0 ? std::shared_ptr<ProxTerm>(std::make_shared<ZeroTerm>())
                                       : std::make_shared<QuadBallTerm>(0.8, 1e18));
    const double mu_h = trial % 2 == 0 ? 0.0 : 0.8;
    const int ncuts = 2 + static_cast<int>(rng.next_u64() % 4);
    std::vector<Cut> cuts;
    double span = 0.0;
    for (int i = 0; i < ncuts; ++i) {
      cuts.push_back(Cut{vec1(rng.uniform(-2.0, 2.0)), rng.uniform(-0.3, 0.3)});
      span = std::max(span, std::abs(cuts.back().slope[0]));
    }
    CutModel model{cuts};
    const VectorXd center = vec1(rng.uniform(-0.5, 0.5));
    const double lam = std::exp(rng.uniform(-3.0, 0.5));
    const SubproblemSolution sol = solve_cut_model(model, inst, center, lam);
    check_solution_invariants(sol, model, inst, center, lam);

    auto obj = [&](const VectorXd& u) {
      return model.value(u) + inst.h_value(u) + (u - center).squaredNorm() / (2.0 * lam);
    };
    const double reach = lam * (span + mu_h * center.norm()) / (1.0 + lam * mu_h) + 3e-4;
    auto grid = testsupport::grid_min_1d(obj, center[0] - reach, center[0] + reach, 1e-4);
    // The solver value is a certified minimum; the grid can only sit above
    // it by its kink discretization error.
    CHECK(sol.objective_value <= grid.value + 1e-10);
    CHECK(grid.value - sol.objective_value <= 2.0 * span * 1e-4 + 1e-8);
    CHECK(std::abs(grid.arg[0] - sol.x[0]) <= 1e-3);
  }
}

TEST_CASE("adding a cut never lowers the subproblem minimum") {
  RandomStream rng(32);
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index n = trial % 2 == 0 ? 1 : 2;
    auto inst = bare(n, std::make_shared<ZeroTerm>());
    std::vector<Cut> cuts;
    const int ncuts = 1 + static_cast<int>(rng.next_u64() % 4);
    for (int i = 0; i < ncuts; ++i)
      cuts.push_back(Cut{rng.gaussian_vector(n), rng.uniform(-0.3, 0.3)});
    const VectorXd center = 0.2 * rng.gaussian_vector(n);
    const double lam = rng.uniform(0.01, 0.5);

    CutModel model{cuts};
    const SubproblemSolution before = solve_cut_model(model, inst, center, lam);
    CutModel larger = model;
    larger.cuts.push_back(Cut{rng.gaussian_vector(n), rng.uniform(-0.3, 0.3)});
    const SubproblemSolution after = solve_cut_model(larger, inst, center, lam);
    CHECK(after.objective_value >= before.objective_value - 1e-10);
  }
}

TEST_CASE("exp-family composite term in the subproblem") {
  auto inst = bare(1, std::make_shared<ExpIntervalTerm>(1.0, 2.0));
  RandomStream rng(33);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Cut> cuts;
    const int ncuts = 1 + static_cast<int>(rng.next_u64() % 4);
    for (int i = 0; i < ncuts; ++i)
      cuts.push_back(Cut{vec1(rng.uniform(-2.0, 2.0)), rng.uniform(-0.3, 0.3)});
    CutModel model{cuts};
    const VectorXd center = vec1(rng.uniform(-1.5, 1.5));
    const double lam = std::exp(rng.uniform(-3.0, 0.5));
    const SubproblemSolution sol = solve_cut_model(model, inst, center, lam);
    check_solution_invariants(sol, model, inst, center, lam);

    auto obj = [&](const VectorXd& u) {
      return model.value(u) + inst.h_value(u) + (u - center).squaredNorm() / (2.0 * lam);
    };
    auto grid = testsupport::grid_min_1d(obj, -2.0, 2.0, 1e-4);
    CHECK(std::abs(grid.arg[0] - sol.x[0]) <= 1e-3);
    CHECK(sol.objective_value <= grid.value + 1e-10);
    CHECK(grid.value - sol.objective_value <= 8e-4);
  }
}

TEST_CASE("penalized value and serious gap helpers") {
  auto inst = bare(1, std::make_shared<ZeroTerm>());
  // f=|x| linearized at 1 gives the slope-one cut through the origin; with
  // center 1 and unit stepsize the subproblem optimum is 1/2 while the best
  // penalized value is 0, so the serious gap goes negative.
  const SubproblemSolution sol = solve_single_cut(Cut{vec1(1.0), 0.0}, inst, vec1(1.0), 1.0);
  CHECK(sol.x[0] == doctest::Approx(0.0));
  CHECK(sol.objective_value == doctest::Approx(0.5));
  const double pen = penalized_value(0.0, sol.x, vec1(1.0), 0.0, 1.0);
  CHECK(compute_t(pen, sol) == doctest::Approx(-0.5));
  CHECK(compute_t(sol.objective_value, sol) == doctest::Approx(0.0));
}

TEST_CASE("empty and degenerate inputs") {
  auto inst = bare(1, std::make_shared<ZeroTerm>());
  CHECK_THROWS_AS(solve_cut_model(CutModel{}, inst, vec1(0.0), 1.0), DomainError);
  CHECK_THROWS_AS(solve_cut_model(CutModel{Cut{vec1(1.0), 0.0}}, inst, vec1(0.0), -1.0),
                  DomainError);
  // Duplicated cuts: any multiplier split certifies.
  CutModel dup{{Cut{vec1(1.0), 0.0}, Cut{vec1(1.0), 0.0}, Cut{vec1(1.0), 0.0}}};
  const SubproblemSolution sol = solve_cut_model(dup, inst, vec1(0.0), 1.0);
  CHECK(sol.x[0] == doctest::Approx(-1.0));
  check_solution_invariants(sol, dup, inst, vec1(0.0), 1.0);
}
