#pragma once

#include "uniprox/config.hpp"
#include "uniprox/oracle.hpp"

namespace uniprox {
namespace theory {

// Contraction modulus sigma(mu, nu; chi, lam) of the inexact prox step.
// Requires 0 <= nu <= mu, chi in [0,1), lam > 0.
double sigma(double mu, double nu, double chi, double lam);

// Per-target-accuracy constant of the subgradient method:
// 8 m_f^2/(1-chi)^2 + epsbar (1/lambda0 + 2 l_f/(1-chi)^2).
double q_eps(const InstanceMeta& meta, double chi, double lambda0, double epsbar);

// Bundle cycle constant 8 + 12 log(1 + l_f^2 D^2 nbar / (16 m_f^2)).
// l_f = 0 gives exactly 8. m_f = 0 with l_f > 0 degenerates: the log argument
// is guarded at 1e-300 and the result capped at 1e4.
double b_const(const InstanceMeta& meta, int nbar);

// Bundle analogue of q_eps: 4 (m_f^2 + epsbar l_f) B/(1-chi)^2 + nbar epsbar/lambda0.
double u_eps(const InstanceMeta& meta, double chi, double lambda0, double epsbar, int nbar);

// Total-iteration bounds. The mu = 0 convention collapses the log branch so
// the minimum picks the accuracy-squared term; chi = 0 (resp. nu = 0) sends
// the corresponding branch to infinity. Ceiling terms clamp at zero when the
// log argument is at most one.
double ucs_total_bound(const InstanceMeta& meta, const SolverConfig& cfg, double d0);
double upb_total_bound(const InstanceMeta& meta, const SolverConfig& cfg, double d0);

// Master bound for a generic serious-step scheme with stepsizes >= lam_floor.
double fsco_total_bound(double mu, double nu, double chi, double lam_floor, double d0,
                        double epsbar);

// Within-cycle decay constants.
double u_lambda(double lam, const InstanceMeta& meta, double chi, double epsbar);
double tau(double u);

// Iteration count after which a (1+sigma)-contracting recursion with floor
// gamma_floor and additive slack delta forces min_j eta_j <= 2 delta:
// min{ (1+sigma)/sigma log(sigma alpha0/(gamma_floor delta) + 1),
//      alpha0/(gamma_floor delta) },  with the sigma = 0 convention equal to
// the second term.
double recurrence_bound(double alpha0, double gamma_floor, double delta, double sigma);

// Stepsize floors and cycle-count caps.
double lambda_floor_ucs(const InstanceMeta& meta, double chi, double epsbar, double lambda0);
double lambda_floor_upb(const InstanceMeta& meta, double chi, double epsbar, double lambda0,
                        int nbar);
double no_reset_lambda(const InstanceMeta& meta, double chi, double epsbar, int nbar);
double reset_cap(const InstanceMeta& meta, double chi, double epsbar, double lambda0, int nbar);
double halving_cap_ucs(const InstanceMeta& meta, double chi, double epsbar, double lambda0);

struct BoundReport {
  double q_eps = 0;
  double u_eps = 0;
  double b_const = 0;
  double sigma = 0;  // evaluated at the method's stepsize floor
  double ucs_bound = 0;
  double upb_bound = 0;
  double fsco_bound = 0;
  double lambda_floor_ucs = 0;
  double lambda_floor_upb = 0;
  double reset_cap = 0;
  double no_reset_lambda = 0;
  double lam_const = 0;
  bool b_const_degenerate = false;  // m_f = 0 with l_f > 0 under a finite diameter
};

// Evaluates every constant for the given instance/configuration. use_upb
// selects which stepsize floor feeds sigma and the generic bound.
BoundReport make_bound_report(const InstanceMeta& meta, const SolverConfig& cfg, double d0,
                              bool use_upb);

}  // namespace theory
}  // namespace uniprox
