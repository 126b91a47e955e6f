#pragma once

#include <Eigen/Core>

#include "uniprox/cut.hpp"
#include "uniprox/oracle.hpp"

namespace uniprox {

// Solution of  min_u  m(u) + h(u) + ||u - center||^2 / (2 lam)
// for a max-of-affine model m, with a duality-gap certificate.
//
//   x               the minimizer
//   model_value     m(x)
//   objective_value m(x) + h(x) + ||x - center||^2 / (2 lam)
//   weights         simplex multipliers over the model's cuts
//   aggregate       the weighted cut  sum_i w_i cut_i
//   inner_gap       certified duality gap (>= 0 up to roundoff)
//
// The returned x always equals prox_tilted_h(aggregate.slope, center, lam),
// and aggregate(x) >= m(x) - inner_gap, which is what downstream bundle
// updates and trace checkers rely on.
struct SubproblemSolution {
  Eigen::VectorXd x;
  double model_value = 0.0;
  double objective_value = 0.0;
  Eigen::VectorXd weights;
  Cut aggregate;
  double inner_gap = 0.0;
};

struct SubproblemOptions {
  double tol = 1e-10;   // absolute duality-gap target
  int max_iter = 10000; // dual ascent iteration cap
};

// Single-cut specialization: weights are trivially [1] and the gap is zero.
SubproblemSolution solve_single_cut(const Cut& cut, const HcoInstance& inst,
                                    const Eigen::VectorXd& center, double lam);

// General max-of-affine model. One cut reduces exactly to solve_single_cut;
// two cuts use a bisection on the dual derivative; larger models run
// projected gradient ascent with Armijo backtracking on the dual.
// Throws NonConvergence if the gap cannot be certified within the cap.
SubproblemSolution solve_cut_model(const CutModel& model, const HcoInstance& inst,
                                   const Eigen::VectorXd& center, double lam,
                                   const SubproblemOptions& opts = {});

// The multiplier-weighted convex combination of the model's cuts.
Cut aggregate_cut(const SubproblemSolution& sol, const CutModel& model);

// phi(x) + chi/(2 lam) ||x - center||^2, the quantity both solvers minimize
// over a cycle's iterates. Both solvers share this one routine so that their
// acceptance tests agree bit for bit.
inline double penalized_value(double phi_x, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& center, double chi, double lam) {
  return phi_x + chi * (x - center).squaredNorm() / (2.0 * lam);
}

// Serious-test gap: best penalized value seen in the cycle minus the
// subproblem optimum. May be negative.
inline double compute_t(double barphi, const SubproblemSolution& sol) {
  return barphi - sol.objective_value;
}

}  // namespace uniprox
