#pragma once

#include <vector>

#include <Eigen/Core>

namespace uniprox {

// Euclidean projection onto the unit simplex {w >= 0, sum w = 1}.
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v);

// Minimum-norm point in shift + conv{columns of A}: returns the simplex
// weights w minimizing ||A w + shift||. Deterministic projected gradient from
// uniform weights; used for subgradient tie-breaking at kinks.
Eigen::VectorXd min_norm_hull_weights(const Eigen::MatrixXd& A, const Eigen::VectorXd& shift);

}  // namespace uniprox
