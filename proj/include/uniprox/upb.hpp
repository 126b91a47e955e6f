#pragma once

#include <optional>

#include <Eigen/Core>

#include "uniprox/bundle.hpp"
#include "uniprox/config.hpp"
#include "uniprox/oracle.hpp"
#include "uniprox/proxcore.hpp"
#include "uniprox/trace.hpp"

namespace uniprox {

// Mutable state of the bundle solver between inner iterations.
struct CycleState {
  long k = 1;                 // serious-cycle index
  long j = 0;                 // completed inner iterations
  int inner_count = 0;        // completed iterations in the current cycle
  double lam = 1.0;           // current prox stepsize
  Eigen::VectorXd center;     // current prox-center
  CutModel model;             // current f-model
  double best_penalized = 0;  // running cycle minimum of the penalized value
  Eigen::VectorXd best_point; // iterate attaining best_penalized
  double first_t = 0;         // t-gap at the cycle's first iteration
};

CycleState make_initial_state(const HcoInstance& inst, const Eigen::VectorXd& x0,
                              const SolverConfig& cfg);

struct StepOutcome {
  CycleState state;
  InnerRecord record;                   // halvings/elapsed filled by the driver
  std::optional<SeriousRecord> serious; // present on serious steps
  SubproblemSolution sol;               // solution of this iteration's subproblem
};

// One inner iteration: solve the prox subproblem on the current model, update
// the cycle's best penalized value, and classify the step as null (refine the
// model), reset (halve the stepsize, keep the center), or serious (move the
// center). The classification is exactly: null when the t-gap exceeds
// (1-chi) epsbar/2 with the cycle cap not yet reached, reset when it exceeds
// the threshold at the cap, serious otherwise.
StepOutcome upb_step(const CycleState& state, const HcoInstance& inst,
                     const SolverConfig& cfg);

// Full bundle solve; with nbar = 1 and a fresh single-cut reset policy the
// iterate sequence coincides with ucs_solve.
RunResult upb_solve(const HcoInstance& inst, const Eigen::VectorXd& x0,
                    const SolverConfig& cfg);

}  // namespace uniprox
