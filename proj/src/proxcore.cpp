#include "uniprox/proxcore.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/Dense>

#include "uniprox/errors.hpp"
#include "uniprox/log.hpp"
#include "uniprox/simplex.hpp"

namespace uniprox {

namespace {

Cut combine(const CutModel& model, const Eigen::VectorXd& w) {
  const Eigen::Index n = model.cuts.front().slope.size();
  Eigen::VectorXd slope = Eigen::VectorXd::Zero(n);
  double offset = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    slope += w[i] * model.cuts[static_cast<std::size_t>(i)].slope;
    offset += w[i] * model.cuts[static_cast<std::size_t>(i)].offset;
  }
  return Cut{std::move(slope), offset};
}

struct DualEval {
  Eigen::VectorXd x;      // inner minimizer for these weights
  Eigen::VectorXd vals;   // cut_i(x)
  double model_value;     // max_i vals_i
  double dual;            // aggregate(x) + h(x) + quad(x)
  double gap;             // sum_i w_i (model_value - vals_i) >= 0
};

DualEval evaluate_weights(const CutModel& model, const Eigen::VectorXd& w,
                          const HcoInstance& inst, const Eigen::VectorXd& center,
                          double lam) {
  DualEval ev;
  const Cut agg = combine(model, w);
  ev.x = inst.h->prox_tilted(agg.slope, center, lam);
  const Eigen::Index k = w.size();
  ev.vals.resize(k);
  for (Eigen::Index i = 0; i < k; ++i)
    ev.vals[i] = model.cuts[static_cast<std::size_t>(i)].value(ev.x);
  ev.model_value = ev.vals.maxCoeff();
  const double quad = (ev.x - center).squaredNorm() / (2.0 * lam);
  ev.dual = agg.value(ev.x) + inst.h_value(ev.x) + quad;
  ev.gap = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) ev.gap += w[i] * std::max(0.0, ev.model_value - ev.vals[i]);
  return ev;
}

using WeightEval = std::function<DualEval(const Eigen::VectorXd&)>;

constexpr double kWeightFloor = 1e-10;  // weights below this carry no complementarity claim
constexpr double kCompSlack = 1e-9;     // max admissible activity slack on a weighted cut

bool complementarity_ok(const Eigen::VectorXd& w, const DualEval& ev) {
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (w[i] > kWeightFloor && ev.model_value - ev.vals[i] > kCompSlack) return false;
  return true;
}


// Newton on the reduced tie system for a fixed support: the support weights
// (last one eliminated against the sum-one constraint) must make all support
// cuts agree at the inner minimizer. Works on the affine set only - weights
// may go negative; the caller's active-set logic handles signs. The Jacobian
// is formed by forward differences, one prox evaluation per column; the
// least-squares solve keeps degenerate supports harmless. Returns the face
// weights and the final tie residual.
std::pair<Eigen::VectorXd, double> solve_face_ties(const std::vector<Eigen::Index>& support,
                                                   const Eigen::VectorXd& w0, Eigen::Index k,
                                                   const WeightEval& eval,
                                                   const Eigen::MatrixXd& slopes,
                                                   const HcoInstance& inst,
                                                   const Eigen::VectorXd& center, double lam) {
  const auto s = static_cast<Eigen::Index>(support.size());
  Eigen::VectorXd ws(s);
  double total = 0.0;
  for (Eigen::Index i = 0; i < s; ++i)
    total += std::max(w0[support[static_cast<std::size_t>(i)]], 0.0);
  for (Eigen::Index i = 0; i < s; ++i)
    ws[i] = total > 0.0 ? std::max(w0[support[static_cast<std::size_t>(i)]], 0.0) / total
                        : 1.0 / static_cast<double>(s);
  // Blend toward uniform so entering members start with room to move.
  ws = 0.75 * ws + Eigen::VectorXd::Constant(s, 0.25 / static_cast<double>(s));
  if (s == 1) {
    ws[0] = 1.0;
    return {ws, 0.0};
  }

  auto residual = [&](const Eigen::VectorXd& wsv) {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(k);
    for (Eigen::Index i = 0; i < s; ++i) full[support[static_cast<std::size_t>(i)]] = wsv[i];
    const DualEval ev = eval(full);
    Eigen::VectorXd r(s - 1);
    for (Eigen::Index i = 0; i + 1 < s; ++i)
      r[i] = ev.vals[support[static_cast<std::size_t>(i)]] -
             ev.vals[support[static_cast<std::size_t>(s - 1)]];
    return std::make_pair(r, ev.model_value);
  };
  const Eigen::Index last = support[static_cast<std::size_t>(s - 1)];

  auto [r, scale0] = residual(ws);
  const double rtol = 1e-14 * (1.0 + std::abs(scale0));
  for (int it = 0; it < 60 && r.lpNorm<Eigen::Infinity>() > rtol; ++it) {
    // Exact Jacobian through the prox directional derivative: moving weight
    // from the eliminated member to member j tilts the aggregate by
    // s_j - s_last and shifts the inner minimizer accordingly.
    Eigen::VectorXd agg_slope = Eigen::VectorXd::Zero(slopes.rows());
    for (Eigen::Index i = 0; i < s; ++i)
      agg_slope += ws[i] * slopes.col(support[static_cast<std::size_t>(i)]);
    Eigen::MatrixXd jac(s - 1, s - 1);
    for (Eigen::Index jcol = 0; jcol + 1 < s; ++jcol) {
      const Eigen::VectorXd dtilt =
          slopes.col(support[static_cast<std::size_t>(jcol)]) - slopes.col(last);
      const Eigen::VectorXd dx = inst.h->prox_tilted_jvp(agg_slope, center, lam, dtilt);
      for (Eigen::Index i = 0; i + 1 < s; ++i)
        jac(i, jcol) =
            (slopes.col(support[static_cast<std::size_t>(i)]) - slopes.col(last)).dot(dx);
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(jac);
    cod.setThreshold(1e-10);
    const Eigen::VectorXd delta = cod.solve(-r);
    if (!delta.allFinite() || delta.norm() == 0.0) break;

    Eigen::VectorXd step(s);
    step.head(s - 1) = delta;
    step[s - 1] = -delta.sum();
    bool accepted = false;
    double alpha = 1.0;
    for (int bt = 0; bt < 40; ++bt) {
      const Eigen::VectorXd wn = ws + alpha * step;
      const auto rn = residual(wn).first;
      if (rn.lpNorm<Eigen::Infinity>() <= r.lpNorm<Eigen::Infinity>() * (1.0 - 1e-4 * alpha) ||
          rn.lpNorm<Eigen::Infinity>() <= rtol) {
        ws = wn;
        r = rn;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
  }

  const double resid = r.lpNorm<Eigen::Infinity>();
  if (resid > 10.0 * rtol && s > 1) {
    // Inconsistent ties: the reduced Hessian is rank-deficient and the dual
    // is linear along its kernel, so the face maximum sits on a sub-face.
    // Return a far point along a kernel ascent ray; it exits the simplex and
    // the caller's blocking step retires the right member.
    Eigen::VectorXd agg_slope = Eigen::VectorXd::Zero(slopes.rows());
    for (Eigen::Index i = 0; i < s; ++i)
      agg_slope += ws[i] * slopes.col(support[static_cast<std::size_t>(i)]);
    Eigen::MatrixXd jac(s - 1, s - 1);
    for (Eigen::Index jcol = 0; jcol + 1 < s; ++jcol) {
      const Eigen::VectorXd dtilt =
          slopes.col(support[static_cast<std::size_t>(jcol)]) - slopes.col(last);
      const Eigen::VectorXd dx = inst.h->prox_tilted_jvp(agg_slope, center, lam, dtilt);
      for (Eigen::Index i = 0; i + 1 < s; ++i)
        jac(i, jcol) =
            (slopes.col(support[static_cast<std::size_t>(i)]) - slopes.col(last)).dot(dx);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeFullV);
    const double smax = svd.singularValues()[0];
    Eigen::VectorXd ray = Eigen::VectorXd::Zero(s - 1);
    for (Eigen::Index i = 0; i < s - 1; ++i) {
      if (svd.singularValues()[i] <= 1e-9 * (smax + 1e-300)) {
        const Eigen::VectorXd v = svd.matrixV().col(i);
        const double along = r.dot(v);
        if (std::abs(along) > 1e-14 * (1.0 + r.norm())) ray += (along > 0.0 ? v : -v);
      }
    }
    if (ray.norm() > 0.0) {
      Eigen::VectorXd dir(s);
      dir.head(s - 1) = ray;
      dir[s - 1] = -ray.sum();
      double most_negative = 0.0;
      for (Eigen::Index i = 0; i < s; ++i) most_negative = std::min(most_negative, dir[i]);
      if (most_negative < 0.0) {
        const double reach = 2.0 * (1.0 + ws.lpNorm<Eigen::Infinity>()) / -most_negative;
        return {ws + reach * dir, resid};
      }
    }
  }
  return {ws, resid};
}

// Primal active-set ascent from the PGD iterate. PGD alone cannot certify
// tight gaps: the gap sum_i w_i (m(x) - cut_i(x)) is first order in the
// weight error while the dual value is second order, so certification needs
// the working face's tie equations solved to machine precision. Classical
// working-set loop with monotone ascent: solve the face optimum; if it is
// infeasible, step to the first blocking bound and retire that member; if it
// is feasible, either the cut dominating the trial solution enters or the
// weights are optimal and the gap is certified.
void refine_on_face(Eigen::VectorXd& w, DualEval& ev, double gap_target,
                    const WeightEval& eval, const Eigen::MatrixXd& slopes,
                    const HcoInstance& inst, const Eigen::VectorXd& center, double lam) {
  const Eigen::Index k = w.size();

  // Seed the working set with the heaviest weights only: generically at most
  // dim+1 cuts tie at a point, and entering steps recover anything missed.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return w[a] > w[b]; });
  std::vector<Eigen::Index> working;
  const std::size_t cap = static_cast<std::size_t>(slopes.rows()) + 2;
  for (Eigen::Index idx : order)
    if (w[idx] > 1e-12 && working.size() < cap) working.push_back(idx);
  if (working.empty()) {
    Eigen::Index top = 0;
    ev.vals.maxCoeff(&top);
    working.push_back(top);
  }

  Eigen::VectorXd cur = w;
  DualEval cur_ev = ev;
  auto adopt_if_better = [&](const Eigen::VectorXd& cand_w, const DualEval& cand_ev) {
    if (cand_ev.gap <= ev.gap || cand_ev.dual >= ev.dual - 1e-12 * (1.0 + std::abs(ev.dual))) {
      w = cand_w;
      ev = cand_ev;
    }
  };

  for (int outer = 0; outer < 4 * static_cast<int>(k) + 12; ++outer) {
    const auto [ws, resid] = solve_face_ties(working, cur, k, eval, slopes, inst, center, lam);

    // Infeasible face optimum: step to the first blocking bound; the blocked
    // member leaves the working set. Ascent is monotone along the segment.
    Eigen::Index blocked = -1;
    double alpha = 1.0;
    for (std::size_t i = 0; i < working.size(); ++i) {
      const double target = ws[static_cast<Eigen::Index>(i)];
      if (target < 0.0) {
        const double cv = std::max(cur[working[i]], 0.0);
        const double a = cv / (cv - target);
        if (a < alpha) {
          alpha = a;
          blocked = static_cast<Eigen::Index>(i);
        }
      }
    }
    if (blocked >= 0 && working.size() > 1) {
      Eigen::VectorXd next = Eigen::VectorXd::Zero(k);
      for (std::size_t i = 0; i < working.size(); ++i) {
        const double cv = std::max(cur[working[i]], 0.0);
        next[working[i]] = cv + alpha * (ws[static_cast<Eigen::Index>(i)] - cv);
      }
      next[working[static_cast<std::size_t>(blocked)]] = 0.0;
      const double total = next.sum();
      if (total <= 0.0) break;
      next /= total;
      cur = next;
      cur_ev = eval(cur);
      adopt_if_better(cur, cur_ev);
      log_debug("  face outer=%d |W|=%zu block -> drop, gap=%.3e", outer, working.size(),
                cur_ev.gap);
      working.erase(working.begin() + blocked);
      continue;
    }

    // Feasible face optimum.
    Eigen::VectorXd full = Eigen::VectorXd::Zero(k);
    for (std::size_t i = 0; i < working.size(); ++i)
      full[working[i]] = std::max(ws[static_cast<Eigen::Index>(i)], 0.0);
    const double total = full.sum();
    if (total <= 0.0) break;
    full /= total;
    const DualEval fe = eval(full);
    cur = full;
    cur_ev = fe;
    adopt_if_better(cur, cur_ev);

    double tied = -std::numeric_limits<double>::infinity();
    for (Eigen::Index idx : working) tied = std::max(tied, fe.vals[idx]);
    Eigen::Index top = 0;
    fe.vals.maxCoeff(&top);
    log_debug("  face outer=%d |W|=%zu resid=%.3e gap=%.3e enter_margin=%.3e", outer,
              working.size(), resid, fe.gap, fe.vals[top] - tied);
    const bool enter = fe.vals[top] - tied > 1e-15 * (1.0 + std::abs(tied)) &&
                       std::find(working.begin(), working.end(), top) == working.end();
    if (!enter) break;  // certified (or at the machine floor)
    working.push_back(top);
  }
}

SubproblemSolution pack(const CutModel& model, Eigen::VectorXd w, const DualEval& ev,
                        const HcoInstance& inst, const Eigen::VectorXd& center, double lam) {
  SubproblemSolution sol;
  sol.x = ev.x;
  sol.model_value = ev.model_value;
  sol.objective_value = ev.model_value + inst.h_value(ev.x) +
                        (ev.x - center).squaredNorm() / (2.0 * lam);
  sol.weights = std::move(w);
  sol.aggregate = combine(model, sol.weights);
  sol.inner_gap = ev.gap;
  return sol;
}

// Drop spuriously weighted inactive cuts when doing so does not hurt the dual
// value. The ascent can stall with tiny weight stuck on a slack cut; removing
// it is always admissible at an exact optimum.
void purify(const CutModel& model, Eigen::VectorXd& w, DualEval& ev, const HcoInstance& inst,
            const Eigen::VectorXd& center, double lam) {
  const Eigen::Index k = w.size();
  for (Eigen::Index i = 0; i < k; ++i) {
    if (w[i] <= 0.0 || w[i] >= 1.0) continue;
    if (ev.model_value - ev.vals[i] <= 0.5 * kCompSlack) continue;
    Eigen::VectorXd cand = w;
    cand[i] = 0.0;
    const double total = cand.sum();
    if (total <= 0.0) continue;
    cand /= total;
    const DualEval ce = evaluate_weights(model, cand, inst, center, lam);
    if (ce.dual >= ev.dual - 1e-14 * (1.0 + std::abs(ev.dual))) {
      w = std::move(cand);
      ev = ce;
    }
  }
}

SubproblemSolution solve_two_cuts(const CutModel& model, const HcoInstance& inst,
                                  const Eigen::VectorXd& center, double lam,
                                  const SubproblemOptions& opts) {
  auto at = [&](double theta) {
    Eigen::VectorXd w(2);
    w << theta, 1.0 - theta;
    return std::make_pair(w, evaluate_weights(model, w, inst, center, lam));
  };
  // Dual derivative in theta is cut_0(x) - cut_1(x), non-increasing by
  // concavity, so a sign bisection pins the maximizer.
  auto deriv = [](const DualEval& ev) { return ev.vals[0] - ev.vals[1]; };

  auto [w0, e0] = at(0.0);
  if (deriv(e0) <= 0.0) return pack(model, w0, e0, inst, center, lam);
  auto [w1, e1] = at(1.0);
  if (deriv(e1) >= 0.0) return pack(model, w1, e1, inst, center, lam);

  double lo = 0.0, hi = 1.0;
  Eigen::VectorXd w;
  DualEval ev;
  for (int it = 0; it < 120; ++it) {
    const double mid = 0.5 * (lo + hi);
    std::tie(w, ev) = at(mid);
    const double d = deriv(ev);
    if (d == 0.0) break;
    (d > 0.0 ? lo : hi) = mid;
    if (hi - lo <= 1e-17 * std::max(1.0, hi)) break;
  }
  if (ev.gap > opts.tol) {
    std::tie(w, ev) = at(0.5 * (lo + hi));
    if (ev.gap > opts.tol)
      throw NonConvergence("two-cut subproblem: duality gap " + std::to_string(ev.gap) +
                           " not certified (tol " + std::to_string(opts.tol) + ", theta " +
                           std::to_string(w[0]) + ")");
  }
  return pack(model, w, ev, inst, center, lam);
}

}  // namespace

SubproblemSolution solve_single_cut(const Cut& cut, const HcoInstance& inst,
                                    const Eigen::VectorXd& center, double lam) {
  if (!(lam > 0.0)) throw DomainError("solve_single_cut: stepsize must be positive");
  SubproblemSolution sol;
  sol.x = inst.h->prox_tilted(cut.slope, center, lam);
  sol.model_value = cut.value(sol.x);
  sol.objective_value = sol.model_value + inst.h_value(sol.x) +
                        (sol.x - center).squaredNorm() / (2.0 * lam);
  sol.weights = Eigen::VectorXd::Ones(1);
  sol.aggregate = cut;
  sol.inner_gap = 0.0;
  return sol;
}

SubproblemSolution solve_cut_model(const CutModel& model, const HcoInstance& inst,
                                   const Eigen::VectorXd& center, double lam,
                                   const SubproblemOptions& opts) {
  if (model.empty()) throw DomainError("solve_cut_model: empty model");
  if (!(lam > 0.0)) throw DomainError("solve_cut_model: stepsize must be positive");
  if (model.size() == 1) return solve_single_cut(model.cuts.front(), inst, center, lam);
  if (model.size() == 2) return solve_two_cuts(model, inst, center, lam, opts);

  const Eigen::Index k = static_cast<Eigen::Index>(model.size());
  Eigen::MatrixXd slopes(model.cuts.front().slope.size(), k);
  for (Eigen::Index i = 0; i < k; ++i) slopes.col(i) = model.cuts[static_cast<std::size_t>(i)].slope;

  const WeightEval eval = [&](const Eigen::VectorXd& wv) {
    return evaluate_weights(model, wv, inst, center, lam);
  };

  Eigen::VectorXd w = Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k));
  DualEval ev = eval(w);
  double step = 1.0 / (lam * (slopes.transpose() * slopes).norm() + 1e-30);

  // Phase 1: projected gradient ascent with Armijo backtracking globalizes;
  // the dual gradient is the vector of cut values at the inner minimizer.
  const int pgd_cap = std::min(opts.max_iter, 100);
  for (int it = 0; it < pgd_cap; ++it) {
    if (ev.gap <= opts.tol && complementarity_ok(w, ev)) break;
    bool moved = false;
    double t = 2.0 * step;
    for (int bt = 0; bt < 60; ++bt) {
      const Eigen::VectorXd cand = project_to_simplex(w + t * ev.vals);
      const double ascent = ev.vals.dot(cand - w);
      if ((cand - w).norm() <= 1e-18) break;
      const DualEval ce = eval(cand);
      if (ce.dual >= ev.dual + 1e-4 * ascent) {
        w = cand;
        ev = ce;
        step = t;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) break;
    log_debug("dual pgd it=%d gap=%.3e dual=%.17g step=%.3e", it, ev.gap, ev.dual, step);
  }

  // Phase 2: active-set Newton refinement until the gap certificate holds.
  for (int attempt = 0; attempt < 4 && !(ev.gap <= opts.tol && complementarity_ok(w, ev));
       ++attempt) {
    refine_on_face(w, ev, opts.tol, eval, slopes, inst, center, lam);
    log_debug("dual face attempt=%d gap=%.3e dual=%.17g", attempt, ev.gap, ev.dual);
  }
  if (!complementarity_ok(w, ev)) purify(model, w, ev, inst, center, lam);
  if (ev.gap > opts.tol)
    throw NonConvergence("solve_cut_model: duality gap " + std::to_string(ev.gap) +
                         " above tolerance after iteration cap");
  return pack(model, w, ev, inst, center, lam);
}

Cut aggregate_cut(const SubproblemSolution& sol, const CutModel& model) {
  return combine(model, sol.weights);
}

}  // namespace uniprox
