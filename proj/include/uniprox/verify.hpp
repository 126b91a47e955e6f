#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uniprox/oracle.hpp"
#include "uniprox/trace.hpp"

namespace uniprox {
namespace verify {

// Result of one checker invocation. pass holds exactly when
// lhs <= rhs + slack_used. Checkers asserting several inequalities at once
// fold them as lhs = max of the per-part normalized margins with rhs = 0.
struct CheckOutcome {
  std::string name;
  bool pass = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack_used = 0.0;
};

// Every checker re-derives its quantities by re-solving the recorded
// subproblem snapshot; nothing from the record is trusted beyond the inputs
// of that solve. All checkers are pure given the record and seed.

// Approximate-prox contract of a serious step: the penalized value of the
// cycle's best point exceeds the model optimum by at most eps, and the
// accepted point is the model's prox point. eps is (1-chi) epsbar / 2.
CheckOutcome check_bb_contract(const SeriousRecord& rec, const HcoInstance& inst, double chi,
                               double eps);

// Contraction inequality of the serious step against the optimal solution,
// with the modulus sigma(mu_phi, min(mu_phi, mu_h), chi, lam).
CheckOutcome check_contraction(const SeriousRecord& rec, const HcoInstance& inst, double chi,
                               double eps);

// Geometric decay of the t-gap along one cycle, plus the cycle-length bound
// when the final gap is still above threshold. All records must share one
// stepsize and prox-center.
CheckOutcome check_tj_decay(const std::vector<InnerRecord>& cycle, const InstanceMeta& meta,
                            double chi, double epsbar);

// First-iteration t-gap bounds: the small-stepsize bound when
// lam <= (1-chi)/(2 l_f), and the bounded-domain bound always.
CheckOutcome check_first_t_bounds(const InnerRecord& first, const InstanceMeta& meta,
                                  double chi, double lam);

// Epsilon-subgradient certificate carried by a serious step: the scaled
// center displacement is an eta-subgradient of phi at the cycle's best point,
// with eta within its stated bounds; the subgradient inequality is sampled at
// random feasible points.
CheckOutcome check_eps_subgrad(const SeriousRecord& rec, const HcoInstance& inst, double chi,
                               double epsbar, int sample_count,
                               std::uint64_t seed = 0x5eedULL);

// Debug-only sampler for the strengthened lower bound behind the contraction
// proof; not part of the default checker set.
CheckOutcome check_strong_lower_bound(const SeriousRecord& rec, const HcoInstance& inst,
                                      double chi, double epsbar, int sample_count,
                                      std::uint64_t seed = 0x5eedULL);

// Contraction margin with an explicit modulus; exposed so tests can show the
// checker rejects inflated moduli. Returns lhs - rhs of the inequality.
double contraction_margin(const SeriousRecord& rec, const HcoInstance& inst, double chi,
                          double eps, double sigma_value);

}  // namespace verify
}  // namespace uniprox
