#include "uniprox/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uniprox/errors.hpp"
#include "uniprox/ucs.hpp"

namespace uniprox {
namespace theory {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// ceil(2 log(arg)) clamped at zero; arguments at or below one need no halvings.
double ceil_two_log(double arg) {
  if (!(arg > 1.0)) return 0.0;
  return std::ceil(2.0 * std::log(arg));
}
}  // namespace

double sigma(double mu, double nu, double chi, double lam) {
  if (!(chi >= 0.0 && chi < 1.0)) throw DomainError("sigma: chi outside [0,1)");
  if (nu < 0.0 || nu > mu) throw DomainError("sigma: need 0 <= nu <= mu");
  if (!(lam > 0.0)) throw DomainError("sigma: lam must be positive");
  const double num = lam * (nu * (1.0 + mu * lam) + chi * (mu - nu));
  const double den = 1.0 + mu * lam + chi * lam * (nu - mu);
  return num / den;
}

double q_eps(const InstanceMeta& meta, double chi, double lambda0, double epsbar) {
  const double om = 1.0 - chi;
  return 8.0 * meta.m_f * meta.m_f / (om * om) +
         epsbar * (1.0 / lambda0 + 2.0 * meta.l_f / (om * om));
}

double b_const(const InstanceMeta& meta, int nbar) {
  if (!meta.diameter.has_value()) throw MissingDiameter("b_const: diameter missing");
  if (meta.l_f == 0.0) return 8.0;
  const double d = *meta.diameter;
  const double num = meta.l_f * meta.l_f * d * d * static_cast<double>(nbar);
  const double den = 16.0 * std::max(meta.m_f * meta.m_f, 1e-300);
  return std::min(8.0 + 12.0 * std::log1p(num / den), 1e4);
}

double u_eps(const InstanceMeta& meta, double chi, double lambda0, double epsbar, int nbar) {
  const double om = 1.0 - chi;
  const double b = b_const(meta, nbar);
  return 4.0 * (meta.m_f * meta.m_f + epsbar * meta.l_f) * b / (om * om) +
         static_cast<double>(nbar) * epsbar / lambda0;
}

namespace {

// Shared shape of the two total-iteration bounds:
// min{ min[(1/chi)(head + body/mu), head + body/nu] log(1 + mu d0^2/eps),
//      d0^2 body / eps^2 } + tail.
double total_bound(double mu, double nu, double chi, double head, double body, double d0,
                   double epsbar, double tail) {
  const double alt = d0 * d0 * body / (epsbar * epsbar);
  double log_term = kInf;
  if (mu > 0.0) {
    const double branch_mu =
        chi > 0.0 ? (head + body / (mu * epsbar)) / chi : kInf;
    const double branch_nu = nu > 0.0 ? head + body / (nu * epsbar) : kInf;
    const double factor = std::min(branch_mu, branch_nu);
    if (factor < kInf) log_term = factor * std::log1p(mu * d0 * d0 / epsbar);
  }
  return std::min(log_term, alt) + tail;
}

}  // namespace

double ucs_total_bound(const InstanceMeta& meta, const SolverConfig& cfg, double d0) {
  const double q = q_eps(meta, cfg.chi, cfg.lambda0, cfg.epsbar);
  const double tail = ceil_two_log(cfg.lambda0 * q / cfg.epsbar);
  return total_bound(meta.mu_phi, meta.mu_h, cfg.chi, 1.0, q, d0, cfg.epsbar, tail);
}

double upb_total_bound(const InstanceMeta& meta, const SolverConfig& cfg, double d0) {
  const double u = u_eps(meta, cfg.chi, cfg.lambda0, cfg.epsbar, cfg.nbar);
  const double nb = static_cast<double>(cfg.nbar);
  const double tail = nb * ceil_two_log(cfg.lambda0 * u / (nb * cfg.epsbar));
  return total_bound(meta.mu_phi, meta.mu_h, cfg.chi, nb, u, d0, cfg.epsbar, tail);
}

double fsco_total_bound(double mu, double nu, double chi, double lam_floor, double d0,
                        double epsbar) {
  if (!(lam_floor > 0.0)) throw DomainError("fsco_total_bound: lam_floor must be positive");
  const double alt = d0 * d0 / (lam_floor * epsbar);
  if (mu <= 0.0) return alt;
  const double branch_mu = chi > 0.0 ? (1.0 + 1.0 / (lam_floor * mu)) / chi : kInf;
  const double branch_nu = nu > 0.0 ? 1.0 + 1.0 / (lam_floor * nu) : kInf;
  const double factor = std::min(branch_mu, branch_nu);
  if (factor == kInf) return alt;
  return std::min(factor * std::log1p(mu * d0 * d0 / epsbar), alt);
}

double u_lambda(double lam, const InstanceMeta& meta, double chi, double epsbar) {
  const double om = 1.0 - chi;
  return 4.0 * lam * (2.0 * meta.m_f * meta.m_f + om * epsbar * meta.l_f) / (om * epsbar);
}

double tau(double u) {
  if (u < 0.0) throw DomainError("tau: negative argument");
  return u / (1.0 + u);
}

double recurrence_bound(double alpha0, double gamma_floor, double delta, double sigma) {
  if (!(gamma_floor > 0.0)) throw DomainError("recurrence_bound: gamma floor must be positive");
  if (alpha0 < 0.0 || delta < 0.0 || sigma < 0.0)
    throw DomainError("recurrence_bound: negative input");
  if (delta == 0.0) return alpha0 == 0.0 ? 0.0 : kInf;
  const double plain = alpha0 / (gamma_floor * delta);
  if (sigma == 0.0) return plain;
  const double logged =
      (1.0 + sigma) / sigma * std::log1p(sigma * alpha0 / (gamma_floor * delta));
  return std::min(logged, plain);
}

double lambda_floor_ucs(const InstanceMeta& meta, double chi, double epsbar, double lambda0) {
  const double denom = 8.0 * meta.m_f * meta.m_f + 2.0 * epsbar * meta.l_f;
  if (denom <= 0.0) return lambda0;
  const double om = 1.0 - chi;
  return std::min(om * om * epsbar / denom, lambda0);
}

double lambda_floor_upb(const InstanceMeta& meta, double chi, double epsbar, double lambda0,
                        int nbar) {
  return static_cast<double>(nbar) * epsbar / u_eps(meta, chi, lambda0, epsbar, nbar);
}

double no_reset_lambda(const InstanceMeta& meta, double chi, double epsbar, int nbar) {
  const double om = 1.0 - chi;
  const double b = b_const(meta, nbar);
  const double denom = 2.0 * (meta.m_f * meta.m_f + epsbar * meta.l_f) * b;
  if (denom <= 0.0) return kInf;
  return om * om * static_cast<double>(nbar) * epsbar / denom;
}

double reset_cap(const InstanceMeta& meta, double chi, double epsbar, double lambda0, int nbar) {
  const double u = u_eps(meta, chi, lambda0, epsbar, nbar);
  return ceil_two_log(lambda0 * u / (static_cast<double>(nbar) * epsbar));
}

double halving_cap_ucs(const InstanceMeta& meta, double chi, double epsbar, double lambda0) {
  return ceil_two_log(lambda0 * q_eps(meta, chi, lambda0, epsbar) / epsbar);
}

BoundReport make_bound_report(const InstanceMeta& meta, const SolverConfig& cfg, double d0,
                              bool use_upb) {
  BoundReport r;
  r.q_eps = q_eps(meta, cfg.chi, cfg.lambda0, cfg.epsbar);
  r.lam_const = lambda_constant(meta, cfg.chi, cfg.epsbar);
  r.lambda_floor_ucs = lambda_floor_ucs(meta, cfg.chi, cfg.epsbar, cfg.lambda0);
  r.ucs_bound = ucs_total_bound(meta, cfg, d0);
  if (meta.diameter.has_value()) {
    r.b_const = b_const(meta, cfg.nbar);
    r.b_const_degenerate = meta.m_f == 0.0 && meta.l_f > 0.0;
    r.u_eps = u_eps(meta, cfg.chi, cfg.lambda0, cfg.epsbar, cfg.nbar);
    r.lambda_floor_upb = lambda_floor_upb(meta, cfg.chi, cfg.epsbar, cfg.lambda0, cfg.nbar);
    r.reset_cap = reset_cap(meta, cfg.chi, cfg.epsbar, cfg.lambda0, cfg.nbar);
    r.no_reset_lambda = no_reset_lambda(meta, cfg.chi, cfg.epsbar, cfg.nbar);
    r.upb_bound = upb_total_bound(meta, cfg, d0);
  }
  const double floor = use_upb && meta.diameter.has_value() ? r.lambda_floor_upb
                                                            : r.lambda_floor_ucs;
  const double nu = std::min(meta.mu_phi, meta.mu_h);
  r.sigma = sigma(meta.mu_phi, nu, cfg.chi, floor);
  r.fsco_bound = fsco_total_bound(meta.mu_phi, nu, cfg.chi, floor, d0, cfg.epsbar);
  return r;
}

}  // namespace theory
}  // namespace uniprox
