#pragma once

#include <optional>

#include "uniprox/cut.hpp"
#include "uniprox/oracle.hpp"
#include "uniprox/proxcore.hpp"

namespace uniprox {

enum class BundleScheme { TwoCuts, MultiCuts };
enum class ModelReset { FreshSingleCut, KeepActive };

struct BundlePolicy {
  BundleScheme scheme = BundleScheme::TwoCuts;
  int max_cuts = 10;                          // MultiCuts only, >= 2
  ModelReset reset_model = ModelReset::FreshSingleCut;
};

// Two-cuts update: replaces the model by {aggregate, new_cut}, where the
// aggregate is the multiplier-weighted combination from the subproblem
// solution. The model must have one or two cuts (an affine minorant plus the
// latest linearization). Throws ContractViolation if the solution's
// stationarity or tie condition fails, which signals an inner-solver
// accuracy problem rather than a modelling choice.
CutModel bu_two_cuts(const Eigen::VectorXd& center, const SubproblemSolution& sol,
                     const CutModel& model, double lam, const Cut& new_cut,
                     const HcoInstance& inst);

// Multiple-cuts update: keeps every cut active at sol.x plus new_cut, keeps
// only cuts from model + {new_cut}, and respects max_cuts unless the active
// set itself is larger. Inactive cuts are dropped oldest-first.
CutModel bu_multi_cuts(const CutModel& model, const SubproblemSolution& sol,
                       const Cut& new_cut, const BundlePolicy& policy);

// Model used at the start of a cycle: the linearization at the prox-center,
// optionally together with all previously retained minorants.
CutModel reset_model(const Eigen::VectorXd& center, const HcoInstance& inst,
                     const BundlePolicy& policy,
                     const std::optional<CutModel>& previous = std::nullopt);

}  // namespace uniprox
