#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace uniprox {

// Affine minorant u -> offset + <slope, u>.
struct Cut {
  Eigen::VectorXd slope;
  double offset = 0.0;

  double value(const Eigen::VectorXd& u) const { return offset + slope.dot(u); }
};

// Linearization of a convex function at x given its value and a subgradient
// there. All call sites build cuts through this helper so that evaluating the
// cut at a point is the one floating-point route used everywhere.
inline Cut linearize(const Eigen::VectorXd& x, double fx, const Eigen::VectorXd& g) {
  return Cut{g, fx - g.dot(x)};
}

// Finite max-of-affine lower model. Cuts keep insertion order; newer cuts are
// appended at the back, which is what the drop-oldest-first pruning relies on.
struct CutModel {
  std::vector<Cut> cuts;

  CutModel() = default;
  explicit CutModel(Cut c) { cuts.push_back(std::move(c)); }
  explicit CutModel(std::vector<Cut> cs) : cuts(std::move(cs)) {}

  bool empty() const { return cuts.empty(); }
  std::size_t size() const { return cuts.size(); }

  double value(const Eigen::VectorXd& u) const {
    double best = -std::numeric_limits<double>::infinity();
    for (const Cut& c : cuts) best = std::max(best, c.value(u));
    return best;
  }
};

}  // namespace uniprox
