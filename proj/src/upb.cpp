#include "uniprox/upb.hpp"

#include <chrono>
#include <cmath>

#include "uniprox/errors.hpp"

namespace uniprox {

namespace {

// Model seeding a new cycle at the given center. KeepActive carries the
// previous cycle's minorants: the full cut set under the multiple-cuts
// scheme, the last aggregate alone under the two-cuts scheme (keeping the
// model in its one-or-two-cut form).
CutModel boundary_model(const Eigen::VectorXd& center, const HcoInstance& inst,
                        const BundlePolicy& policy, const CutModel& old_model,
                        const SubproblemSolution& sol) {
  if (policy.reset_model == ModelReset::FreshSingleCut)
    return reset_model(center, inst, policy);
  if (policy.scheme == BundleScheme::TwoCuts)
    return reset_model(center, inst, policy, CutModel{aggregate_cut(sol, old_model)});
  return reset_model(center, inst, policy, old_model);
}

}  // namespace

CycleState make_initial_state(const HcoInstance& inst, const Eigen::VectorXd& x0,
                              const SolverConfig& cfg) {
  CycleState st;
  st.k = 1;
  st.j = 0;
  st.inner_count = 0;
  st.lam = cfg.lambda0;
  st.center = x0;
  st.model = reset_model(x0, inst, cfg.policy);
  st.best_penalized = std::numeric_limits<double>::quiet_NaN();
  st.best_point = x0;
  st.first_t = std::numeric_limits<double>::quiet_NaN();
  return st;
}

StepOutcome upb_step(const CycleState& state, const HcoInstance& inst,
                     const SolverConfig& cfg) {
  StepOutcome out;
  out.state = state;
  CycleState& st = out.state;

  SubproblemOptions opts;
  opts.tol = cfg.tol_inner;
  out.sol = solve_cut_model(st.model, inst, st.center, st.lam, opts);
  const SubproblemSolution& sol = out.sol;

  const double phi_x = inst.phi(sol.x);
  const double pen = penalized_value(phi_x, sol.x, st.center, cfg.chi, st.lam);
  if (st.inner_count == 0 || pen < st.best_penalized) {
    st.best_penalized = pen;
    st.best_point = sol.x;
  }
  const int n_now = st.inner_count + 1;
  const double t_gap = compute_t(st.best_penalized, sol);
  if (st.inner_count == 0) st.first_t = t_gap;

  InnerRecord& row = out.record;
  row.j = state.j + 1;
  row.k = state.k;
  row.n_in_cycle = n_now;
  row.lam = state.lam;
  row.t_gap = t_gap;
  row.phi_x = phi_x;
  row.best_penalized = st.best_penalized;
  row.inner_gap = sol.inner_gap;

  const double threshold = (1.0 - cfg.chi) * cfg.epsbar / 2.0;
  if (t_gap > threshold && n_now < cfg.nbar) {
    row.event = Event::Null;
    const Cut new_cut = inst.linearize_f(sol.x);
    st.model = cfg.policy.scheme == BundleScheme::TwoCuts
                   ? bu_two_cuts(st.center, sol, st.model, st.lam, new_cut, inst)
                   : bu_multi_cuts(st.model, sol, new_cut, cfg.policy);
    st.inner_count = n_now;
  } else if (t_gap > threshold) {
    row.event = Event::Reset;
    st.lam *= 0.5;
    st.inner_count = 0;
    st.model = boundary_model(st.center, inst, cfg.policy, state.model, sol);
  } else {
    row.event = Event::Serious;
    SeriousRecord sr;
    sr.k = state.k;
    sr.lam = state.lam;
    sr.center_prev = state.center;
    sr.x_hat = sol.x;
    sr.y_hat = st.best_point;
    sr.model_snapshot = state.model;
    sr.weights = sol.weights;
    sr.aggregate = sol.aggregate;
    out.serious = std::move(sr);
    st.center = sol.x;
    st.k = state.k + 1;
    st.inner_count = 0;
    st.model = boundary_model(st.center, inst, cfg.policy, state.model, sol);
  }
  st.j = state.j + 1;
  return out;
}

RunResult upb_solve(const HcoInstance& inst, const Eigen::VectorXd& x0,
                    const SolverConfig& cfg) {
  cfg.validate();
  if (!inst.h->feasible(x0)) throw DomainError("upb_solve: start point infeasible");
  if (cfg.termination == Termination::KnownOptimal && !inst.meta.phi_star.has_value())
    throw MissingMeta("upb_solve: KnownOptimal termination needs phi_star");
  if (cfg.policy.scheme == BundleScheme::MultiCuts && cfg.policy.max_cuts < 2)
    throw DomainError("upb_solve: max_cuts must be at least 2");

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed_ns = [&]() {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now() - t0)
        .count();
  };

  RunResult res;
  res.best_point = x0;
  res.best_value = inst.phi(x0);
  res.status = RunStatus::BudgetExhausted;
  CycleState st = make_initial_state(inst, x0, cfg);
  long halvings = 0;

  try {
    while (st.j < cfg.budget_inner) {
      StepOutcome out = upb_step(st, inst, cfg);
      InnerRecord row = out.record;

      const double phi_x = row.phi_x;
      if (phi_x < res.best_value) {
        res.best_value = phi_x;
        res.best_point = out.sol.x;
      }

      if (cfg.termination == Termination::KnownOptimal &&
          phi_x - *inst.meta.phi_star <= cfg.epsbar) {
        // Stopped on the freshly computed iterate: the classification above
        // never takes effect, so the previous state stands.
        row.event = Event::Stop;
        row.halvings = halvings;
        row.elapsed_ns = elapsed_ns();
        res.trace.rows.push_back(row);
        res.status = RunStatus::Solved;
        break;
      }

      if (row.event == Event::Reset) ++halvings;
      if (row.event == Event::Serious) {
        ++res.serious_steps;
        res.trace.serious.push_back(std::move(*out.serious));
      }
      row.halvings = halvings;
      row.elapsed_ns = elapsed_ns();
      res.trace.rows.push_back(row);
      st = std::move(out.state);
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
