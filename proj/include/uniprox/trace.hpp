#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "uniprox/cut.hpp"

namespace uniprox {

enum class Event { Null, Serious, Reset, Stop };

const char* event_name(Event e);
Event event_from_name(const std::string& name);

// One inner iteration. N is the within-cycle count after the iteration, so
// the first record of a cycle carries N = 1 and a reset record carries the
// cycle cap.
struct InnerRecord {
  long j = 0;
  long k = 0;
  int n_in_cycle = 0;
  double lam = 0.0;
  double t_gap = 0.0;        // best penalized value minus subproblem optimum
  double phi_x = 0.0;        // phi at the subproblem minimizer
  double best_penalized = 0.0;
  Event event = Event::Null;
  double inner_gap = 0.0;    // duality gap certified for the subproblem
  long halvings = 0;         // cumulative stepsize halvings including this row
  std::int64_t elapsed_ns = 0;
};

// Snapshot taken at a serious step; enough to re-solve the prox subproblem
// offline and re-derive every quantity the trace checkers assert.
struct SeriousRecord {
  long k = 0;
  double lam = 0.0;
  Eigen::VectorXd center_prev;  // prox-center before the step
  Eigen::VectorXd x_hat;        // accepted prox point
  Eigen::VectorXd y_hat;        // best penalized point of the cycle
  CutModel model_snapshot;      // f-model of the accepted subproblem
  Eigen::VectorXd weights;
  Cut aggregate;
};

struct RunTrace {
  std::string run_id;
  std::vector<InnerRecord> rows;
  std::vector<SeriousRecord> serious;
};

// Rows of one cycle: maximal run sharing a stepsize and prox-center, closed
// by a serious/reset/stop row.
std::vector<std::vector<InnerRecord>> split_cycles(const std::vector<InnerRecord>& rows);

}  // namespace uniprox
