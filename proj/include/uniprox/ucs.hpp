#pragma once

#include <Eigen/Core>

#include "uniprox/config.hpp"
#include "uniprox/oracle.hpp"

namespace uniprox {

// Stepsize below which the acceptance test provably never fails, given the
// instance constants: (1-chi)^2 epsbar / (4 m_f^2 + epsbar l_f).
// Degenerate denominator (m_f = l_f = 0) returns the cap 1e6.
double lambda_constant(const InstanceMeta& meta, double chi, double epsbar);

// Composite subgradient method with a halving line search on the prox
// stepsize. Each iteration solves the single-linearization prox subproblem
// at the current center; the step is accepted when the penalized model gap
// falls below (1-chi) epsbar / 2, otherwise the stepsize is halved and the
// center kept. KnownOptimal termination stops as soon as an iterate is
// epsbar-optimal.
RunResult ucs_solve(const HcoInstance& inst, const Eigen::VectorXd& x0,
                    const SolverConfig& cfg);

}  // namespace uniprox
