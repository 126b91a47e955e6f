#include "uniprox/verify.hpp"

#include <algorithm>
#include <cmath>

#include "uniprox/errors.hpp"
#include "uniprox/proxcore.hpp"
#include "uniprox/theory.hpp"

namespace uniprox {
namespace verify {

namespace {

constexpr double kSlack = 1e-8;

// Re-solve the snapshot's prox subproblem; the solution is the re-derived
// ground truth for every checker below.
SubproblemSolution resolve(const SeriousRecord& rec, const HcoInstance& inst) {
  return solve_cut_model(rec.model_snapshot, inst, rec.center_prev, rec.lam);
}

CheckOutcome folded(std::string name, std::initializer_list<double> margins) {
  CheckOutcome out;
  out.name = std::move(name);
  out.lhs = -std::numeric_limits<double>::infinity();
  for (double m : margins) out.lhs = std::max(out.lhs, m);
  out.rhs = 0.0;
  out.slack_used = kSlack;
  out.pass = out.lhs <= out.rhs + out.slack_used;
  return out;
}

double gamma_at(const SeriousRecord& rec, const HcoInstance& inst, const Eigen::VectorXd& u) {
  return rec.model_snapshot.value(u) + inst.h_value(u);
}

}  // namespace

CheckOutcome check_bb_contract(const SeriousRecord& rec, const HcoInstance& inst, double chi,
                               double eps) {
  const SubproblemSolution sol = resolve(rec, inst);
  const double scale = 1.0 + rec.center_prev.norm();

  const double replay = (sol.x - rec.x_hat).norm() / scale;
  const Eigen::VectorXd xprox = inst.h->prox_tilted(sol.aggregate.slope, rec.center_prev, rec.lam);
  const double prox_res = (xprox - sol.x).norm() / scale;

  const double pen_y = penalized_value(inst.phi(rec.y_hat), rec.y_hat, rec.center_prev, chi,
                                       rec.lam);
  const double model_opt = gamma_at(rec, inst, sol.x) +
                           (sol.x - rec.center_prev).squaredNorm() / (2.0 * rec.lam);
  const double bb_margin = pen_y - model_opt - eps;

  return folded("bb", {bb_margin, replay, prox_res});
}

double contraction_margin(const SeriousRecord& rec, const HcoInstance& inst, double chi,
                          double eps, double sigma_value) {
  if (!inst.meta.x_star.has_value())
    throw MissingMeta("check_contraction: x_star missing from instance metadata");
  const Eigen::VectorXd& u = *inst.meta.x_star;
  const SubproblemSolution sol = resolve(rec, inst);

  const double lam = rec.lam;
  const double lhs = 2.0 * lam * (inst.phi(rec.y_hat) - inst.phi(u));
  const double rhs = 2.0 * lam * eps / (1.0 - chi) + (rec.center_prev - u).squaredNorm() -
                     (1.0 + sigma_value) * (sol.x - u).squaredNorm();
  const double scale = 1.0 + std::abs(lhs) + (rec.center_prev - u).squaredNorm() +
                       (1.0 + sigma_value) * (sol.x - u).squaredNorm();
  return (lhs - rhs) / scale;
}

CheckOutcome check_contraction(const SeriousRecord& rec, const HcoInstance& inst, double chi,
                               double eps) {
  const double mu = inst.meta.mu_phi;
  // Max-of-affine models contribute no curvature, so the model's modulus is
  // exactly the one of h.
  const double nu = std::min(mu, inst.meta.mu_h);
  const double s = theory::sigma(mu, nu, chi, rec.lam);
  return folded("contraction", {contraction_margin(rec, inst, chi, eps, s)});
}

CheckOutcome check_tj_decay(const std::vector<InnerRecord>& cycle, const InstanceMeta& meta,
                            double chi, double epsbar) {
  if (cycle.empty()) throw DomainError("check_tj_decay: empty cycle");
  const double lam = cycle.front().lam;
  for (const InnerRecord& r : cycle)
    if (r.lam != lam || r.k != cycle.front().k)
      throw DomainError("check_tj_decay: records do not form one cycle");

  const double u = theory::u_lambda(lam, meta, chi, epsbar);
  const double tau = theory::tau(u);
  const double quarter = (1.0 - chi) * epsbar / 4.0;
  const double t_first = cycle.front().t_gap;

  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < cycle.size(); ++idx) {
    const double decay = std::pow(tau, static_cast<double>(idx)) * (t_first - quarter);
    worst = std::max(worst, cycle[idx].t_gap - quarter - decay);
  }

  // Length bound applies when the cycle ends still above threshold.
  const double threshold = (1.0 - chi) * epsbar / 2.0;
  if (cycle.back().t_gap > threshold) {
    const double len = static_cast<double>(cycle.size() - 1);
    double cap = -std::numeric_limits<double>::infinity();
    if (t_first > 0.0)
      cap = (1.0 + u) * std::log(4.0 * t_first / ((1.0 - chi) * epsbar));
    worst = std::max(worst, len < cap ? -1.0 : 1.0);
  }
  return folded("tj_decay", {worst});
}

CheckOutcome check_first_t_bounds(const InnerRecord& first, const InstanceMeta& meta,
                                  double chi, double lam) {
  if (!meta.diameter.has_value())
    throw MissingDiameter("check_first_t_bounds: diameter missing");
  const double om = 1.0 - chi;
  const double d = *meta.diameter;

  double small_step = -std::numeric_limits<double>::infinity();
  if (meta.l_f == 0.0 || lam <= om / (2.0 * meta.l_f))
    small_step = first.t_gap - 4.0 * lam * meta.m_f * meta.m_f / om;

  const double bounded =
      first.t_gap - lam * (16.0 * meta.m_f * meta.m_f + meta.l_f * meta.l_f * d * d) / (4.0 * om);
  return folded("first_t", {small_step, bounded});
}

CheckOutcome check_eps_subgrad(const SeriousRecord& rec, const HcoInstance& inst, double chi,
                               double epsbar, int sample_count, std::uint64_t seed) {
  const SubproblemSolution sol = resolve(rec, inst);
  const double lam = rec.lam;
  const double eps = (1.0 - chi) * epsbar / 2.0;

  const Eigen::VectorXd s = (rec.center_prev - sol.x) / lam;
  const double phi_y = inst.phi(rec.y_hat);
  const double eta = phi_y - gamma_at(rec, inst, sol.x) - s.dot(rec.y_hat - sol.x);

  const double nonneg = eta >= -1e-10 ? -1.0 : 1.0;
  const double upper = 2.0 * lam * eta -
                       (2.0 * lam * eps - (rec.y_hat - sol.x).squaredNorm() +
                        (1.0 - chi) * (rec.y_hat - rec.center_prev).squaredNorm());

  RandomStream rng(seed);
  double sampled = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < sample_count; ++i) {
    const Eigen::VectorXd u = inst.sample_feasible(rng);
    const double lower = phi_y + s.dot(u - rec.y_hat) - eta;
    sampled = std::max(sampled, lower - inst.phi(u));
  }
  return folded("eps_subgrad", {nonneg, upper, sampled});
}

CheckOutcome check_strong_lower_bound(const SeriousRecord& rec, const HcoInstance& inst,
                                      double chi, double epsbar, int sample_count,
                                      std::uint64_t seed) {
  const SubproblemSolution sol = resolve(rec, inst);
  const double lam = rec.lam;
  (void)epsbar;

  const Eigen::VectorXd s = (rec.center_prev - sol.x) / lam;
  const double phi_y = inst.phi(rec.y_hat);
  const double eta = phi_y - gamma_at(rec, inst, sol.x) - s.dot(rec.y_hat - sol.x);

  const double mu = inst.meta.mu_phi;
  const double nu = std::min(mu, inst.meta.mu_h);
  const double zeta = chi;

  RandomStream rng(seed);
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < sample_count; ++i) {
    const Eigen::VectorXd u = inst.sample_feasible(rng);
    const double lower = phi_y + s.dot(u - rec.y_hat) +
                         0.5 * zeta * (mu - nu) * (u - rec.y_hat).squaredNorm() -
                         eta / (1.0 - zeta) +
                         zeta / (1.0 - zeta) * 0.5 * nu * (rec.y_hat - sol.x).squaredNorm() +
                         0.5 * nu * (u - sol.x).squaredNorm();
    worst = std::max(worst, lower - inst.phi(u));
  }
  return folded("qphi_debug", {worst});
}

}  // namespace verify
}  // namespace uniprox
