#include "uniprox/bundle.hpp"

#include <algorithm>
#include <cmath>

#include "uniprox/errors.hpp"

namespace uniprox {

CutModel bu_two_cuts(const Eigen::VectorXd& center, const SubproblemSolution& sol,
                     const CutModel& model, double lam, const Cut& new_cut,
                     const HcoInstance& inst) {
  if (model.size() != 1 && model.size() != 2)
    throw ContractViolation("bu_two_cuts: model must hold one or two cuts");

  const Cut agg = aggregate_cut(sol, model);

  // Stationarity: x must be the prox point of the aggregate's tilt.
  const Eigen::VectorXd xprox = inst.h->prox_tilted(agg.slope, center, lam);
  const double scale = 1.0 + center.norm();
  if ((xprox - sol.x).norm() > 1e-8 * scale)
    throw ContractViolation("bu_two_cuts: aggregate stationarity residual too large");

  // Tie condition: the weighted combination matches the max at x.
  if (std::abs(agg.value(sol.x) - sol.model_value) >
      1e-8 * (1.0 + std::abs(sol.model_value)))
    throw ContractViolation("bu_two_cuts: aggregate does not match model value at x");

  return CutModel{{agg, new_cut}};
}

CutModel bu_multi_cuts(const CutModel& model, const SubproblemSolution& sol,
                       const Cut& new_cut, const BundlePolicy& policy) {
  std::vector<Cut> active;
  std::vector<Cut> inactive;  // insertion order preserved: oldest first
  for (const Cut& c : model.cuts) {
    if (c.value(sol.x) >= sol.model_value - 1e-8)
      active.push_back(c);
    else
      inactive.push_back(c);
  }

  const std::size_t cap = static_cast<std::size_t>(std::max(policy.max_cuts, 2));
  std::vector<Cut> out = std::move(active);
  if (out.size() + 1 < cap) {
    // Room left after the actives and the new cut: retain the newest
    // inactive cuts, dropping oldest first.
    const std::size_t room = cap - 1 - out.size();
    const std::size_t keep = std::min(room, inactive.size());
    out.insert(out.end(), inactive.end() - static_cast<std::ptrdiff_t>(keep), inactive.end());
  }
  out.push_back(new_cut);
  return CutModel{std::move(out)};
}

CutModel reset_model(const Eigen::VectorXd& center, const HcoInstance& inst,
                     const BundlePolicy& policy, const std::optional<CutModel>& previous) {
  CutModel m{inst.linearize_f(center)};
  if (policy.reset_model == ModelReset::KeepActive && previous.has_value()) {
    for (const Cut& c : previous->cuts) m.cuts.push_back(c);
  }
  return m;
}

}  // namespace uniprox
