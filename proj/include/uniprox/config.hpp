#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "uniprox/bundle.hpp"
#include "uniprox/trace.hpp"

namespace uniprox {

enum class Termination { KnownOptimal, BudgetOnly };

struct SolverConfig {
  double chi = 0.5;            // penalized-gap weight, in [0, 1)
  double lambda0 = 1.0;        // initial prox stepsize
  double epsbar = 1e-3;        // target accuracy
  int nbar = 1;                // cycle cap (bundle solver only)
  long budget_inner = 100000;  // every inner iteration costs one unit
  Termination termination = Termination::KnownOptimal;
  double tol_inner = 1e-10;    // duality-gap target for subproblems
  BundlePolicy policy;         // bundle solver only
  std::vector<std::string> checks;

  void validate() const;
};

enum class RunStatus { Solved, BudgetExhausted, Error };

struct RunResult {
  RunStatus status = RunStatus::Error;
  Eigen::VectorXd best_point;
  double best_value = 0.0;
  long iterations_inner = 0;
  long serious_steps = 0;
  long halvings = 0;
  RunTrace trace;
  std::string error_message;  // set when status == Error
};

const char* status_name(RunStatus s);

}  // namespace uniprox
