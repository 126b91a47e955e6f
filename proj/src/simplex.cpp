#include "uniprox/simplex.hpp"

#include <algorithm>
#include <cmath>

namespace uniprox {

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v) {
  const Eigen::Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0;
  double theta = 0.0;
  Eigen::Index rho = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    css += u[static_cast<std::size_t>(i)];
    const double t = (css - 1.0) / static_cast<double>(i + 1);
    if (u[static_cast<std::size_t>(i)] - t > 0.0) {
      rho = i + 1;
      theta = t;
    }
  }
  (void)rho;
  return (v.array() - theta).max(0.0).matrix();
}

Eigen::VectorXd min_norm_hull_weights(const Eigen::MatrixXd& A, const Eigen::VectorXd& shift) {
  const Eigen::Index k = A.cols();
  Eigen::VectorXd w = Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k));
  if (k == 1) return w;

  // Lipschitz constant of the gradient of ||A w + shift||^2 over the simplex.
  const double lip = 2.0 * (A.transpose() * A).norm() + 1e-30;
  const double step = 1.0 / lip;
  Eigen::VectorXd point = A * w + shift;
  double best = point.squaredNorm();
  for (int it = 0; it < 500; ++it) {
    const Eigen::VectorXd grad = 2.0 * (A.transpose() * point);
    const Eigen::VectorXd next = project_to_simplex(w - step * grad);
    const double moved = (next - w).norm();
    w = next;
    point = A * w + shift;
    const double val = point.squaredNorm();
    if (moved <= 1e-15 || std::abs(best - val) <= 1e-16 * (1.0 + best)) {
      best = val;
      break;
    }
    best = val;
  }
  return w;
}

}  // namespace uniprox
