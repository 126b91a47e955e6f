#include "uniprox/ucs.hpp"

#include <chrono>

#include "uniprox/errors.hpp"
#include "uniprox/proxcore.hpp"

namespace uniprox {

double lambda_constant(const InstanceMeta& meta, double chi, double epsbar) {
  if (!(chi >= 0.0 && chi < 1.0)) throw DomainError("lambda_constant: chi outside [0,1)");
  if (!(epsbar > 0.0)) throw DomainError("lambda_constant: epsbar must be positive");
  const double denom = 4.0 * meta.m_f * meta.m_f + epsbar * meta.l_f;
  if (denom <= 0.0) return 1e6;  // affine f: any stepsize passes the test
  return (1.0 - chi) * (1.0 - chi) * epsbar / denom;
}

RunResult ucs_solve(const HcoInstance& inst, const Eigen::VectorXd& x0,
                    const SolverConfig& cfg) {
  cfg.validate();
  if (!inst.h->feasible(x0)) throw DomainError("ucs_solve: start point infeasible");
  if (cfg.termination == Termination::KnownOptimal && !inst.meta.phi_star.has_value())
    throw MissingMeta("ucs_solve: KnownOptimal termination needs phi_star");

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed_ns = [&]() {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now() - t0)
        .count();
  };

  RunResult res;
  const double threshold = (1.0 - cfg.chi) * cfg.epsbar / 2.0;
  double lam = cfg.lambda0;
  long k = 1;
  long halvings = 0;
  Eigen::VectorXd center = x0;
  res.best_point = x0;
  res.best_value = inst.phi(x0);
  res.status = RunStatus::BudgetExhausted;

  try {
    for (long j = 1; j <= cfg.budget_inner; ++j) {
      const Cut cut = inst.linearize_f(center);
      const SubproblemSolution sol = solve_single_cut(cut, inst, center, lam);
      const double phi_x = inst.phi(sol.x);
      const double pen = penalized_value(phi_x, sol.x, center, cfg.chi, lam);
      const double t_gap = compute_t(pen, sol);

      if (phi_x < res.best_value) {
        res.best_value = phi_x;
        res.best_point = sol.x;
      }

      InnerRecord row;
      row.j = j;
      row.k = k;
      row.n_in_cycle = 1;
      row.lam = lam;
      row.t_gap = t_gap;
      row.phi_x = phi_x;
      row.best_penalized = pen;
      row.inner_gap = sol.inner_gap;

      if (cfg.termination == Termination::KnownOptimal &&
          phi_x - *inst.meta.phi_star <= cfg.epsbar) {
        row.event = Event::Stop;
        row.halvings = halvings;
        row.elapsed_ns = elapsed_ns();
        res.trace.rows.push_back(row);
        res.status = RunStatus::Solved;
        break;
      }

      if (t_gap <= threshold) {
        row.event = Event::Serious;
        SeriousRecord sr;
        sr.k = k;
        sr.lam = lam;
        sr.center_prev = center;
        sr.x_hat = sol.x;
        sr.y_hat = sol.x;
        sr.model_snapshot = CutModel{cut};
        sr.weights = sol.weights;
        sr.aggregate = sol.aggregate;
        res.trace.serious.push_back(std::move(sr));
        center = sol.x;
        ++k;
        ++res.serious_steps;
      } else {
        row.event = Event::Reset;
        lam *= 0.5;
        ++halvings;
      }
      row.halvings = halvings;
      row.elapsed_ns = elapsed_ns();
      res.trace.rows.push_back(row);
    }
  } catch (const SolverError& e) {
    res.status = RunStatus::Error;
    res.error_message = e.what();
  }

  res.iterations_inner = static_cast<long>(res.trace.rows.size());
  res.halvings = halvings;
  return res;
}

}  // namespace uniprox
