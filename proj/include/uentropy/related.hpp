#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "uentropy/discrete.hpp"
#include "uentropy/errors.hpp"
#include "uentropy/ext_real.hpp"
#include "uentropy/prob_vector.hpp"
#include "uentropy/solver.hpp"
#include "uentropy/utility.hpp"

namespace uentropy {

/// Renyi order alpha in (0,1) U (1,inf). The bijection alpha = 1/(1-gamma)
/// ties each order to an isoelastic utility exponent gamma in
/// (-inf,0) U (0,1).
struct OrderAlpha {
  double alpha;

  explicit OrderAlpha(double a) : alpha(a) {
    if (!(a > 0.0) || a == 1.0)
      throw InvalidAlpha("Renyi order must lie in (0,1) U (1,inf), got " + std::to_string(a));
  }
  static OrderAlpha from_gamma(double gamma) { return OrderAlpha(1.0 / (1.0 - gamma)); }
  double gamma() const { return 1.0 - 1.0 / alpha; }
};

/// Shannon entropy -sum p_i ln p_i (0 ln 0 = 0).
inline ExtReal shannon(const ProbVector& p) {
  double s = 0.0;
  for (double pi : p)
    if (pi > 0.0) s -= pi * std::log(pi);
  return ExtReal(s);
}

/// Kullback-Leibler divergence sum p_i ln(p_i/q_i), +inf unless p << q.
inline ExtReal shannon(const ProbVector& p, const ProbVector& q) {
  if (!absolutely_continuous(p, q)) return ExtReal::pos_inf();
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > 0.0) s += p[i] * std::log(p[i] / q[i]);
  return ExtReal(s);
}

/// Renyi entropy of order alpha: (1/(1-alpha)) ln sum p_i^alpha.
inline ExtReal renyi(OrderAlpha order, const ProbVector& p) {
  double s = 0.0;
  for (double pi : p)
    if (pi > 0.0) s += std::pow(pi, order.alpha);
  return ExtReal(std::log(s) / (1.0 - order.alpha));
}

/// Renyi divergence of order alpha. For alpha < 1 (gamma < 0) the sum runs
/// over the support of q, which silently drops the singular part of p; for
/// alpha > 1 (gamma in (0,1)) the divergence is +inf unless p << q.
inline ExtReal renyi(OrderAlpha order, const ProbVector& p, const ProbVector& q) {
  if (p.size() != q.size())
    throw LengthMismatch("renyi: lengths " + std::to_string(p.size()) + " vs " +
                         std::to_string(q.size()));
  if (order.alpha > 1.0 && !absolutely_continuous(p, q)) return ExtReal::pos_inf();
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (q[i] > 0.0 && p[i] > 0.0)
      s += std::pow(p[i], order.alpha) * std::pow(q[i], 1.0 - order.alpha);
  if (s == 0.0) return ExtReal::pos_inf();  // p and q mutually singular
  return ExtReal(std::log(s) / (order.alpha - 1.0));
}

/// Sharma-Mittal relative entropy of order alpha and degree 2 - 1/alpha:
/// (alpha/(alpha-1)) ((sum p_i^alpha q_i^(1-alpha))^(1/alpha) - 1).
inline ExtReal sharma_mittal(OrderAlpha order, const ProbVector& p, const ProbVector& q) {
  if (!absolutely_continuous(p, q))
    throw NotAbsolutelyContinuous("sharma_mittal requires p << q");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > 0.0) s += std::pow(p[i], order.alpha) * std::pow(q[i], 1.0 - order.alpha);
  return ExtReal(order.alpha / (order.alpha - 1.0) * (std::pow(s, 1.0 / order.alpha) - 1.0));
}

/// Friedman-Huang-Sandow U-relative entropy
/// D_u(p || q) = sup_{w in S_k} sum_i u(w_i/q_i) p_i - u(1), defined for
/// p << q. Computed through D_u = u(e^{H_u(p||q)}) - u(1); the raw
/// definition is available as fhs_relative_direct for cross-checking.
inline ExtReal fhs_relative(const UtilitySpec& u, const ProbVector& p, const ProbVector& q,
                            const SolveConfig& cfg = {}) {
  if (!absolutely_continuous(p, q))
    throw NotAbsolutelyContinuous("fhs_relative is undefined unless p << q");
  const EntropyReport rep = relative_H(u, p, q, cfg);
  // p << q on a finite space keeps H finite (the density is bounded); an
  // infinite H can only arrive through round-off at the u(inf) boundary.
  if (!rep.entropy.is_finite()) return u.u_at_infinity - ExtReal(u.eval(1.0));
  return ExtReal(u.eval(std::exp(rep.entropy.value())) - u.eval(1.0));
}

/// Grid evaluation of the FHS definition itself (k <= 4): maximizes
/// sum_i u(w_i/q_i) p_i over the simplex grid with denominator `resolution`.
inline ExtReal fhs_relative_direct(const UtilitySpec& u, const ProbVector& p,
                                   const ProbVector& q, int resolution) {
  if (!absolutely_continuous(p, q))
    throw NotAbsolutelyContinuous("fhs_relative is undefined unless p << q");
  if (p.size() > 4) throw TooLarge("fhs_relative_direct supports k <= 4");
  if (resolution < 100) throw Error("fhs_relative_direct: resolution must be >= 100");
  const auto active = p.support();
  const int r = resolution;
  std::vector<std::vector<double>> tables;
  tables.reserve(active.size());
  for (std::size_t i : active) {
    std::vector<double> t(static_cast<std::size_t>(r) + 1, 0.0);
    for (int j = 1; j <= r; ++j) t[j] = u.eval(static_cast<double>(j) / r / q[i]) * p[i];
    tables.push_back(std::move(t));
  }
  return ExtReal(detail::max_over_compositions(tables, r) - u.eval(1.0));
}

/// FHS U-entropy H_u(p) = u(k) - u(1) - D_u(p || uniform_k), computed via
/// the rescaled-utility identity H_u(p) = u_k(1) - u_k(e^{-h_{u_k}(p)}).
inline ExtReal fhs_entropy(const UtilitySpec& u, const ProbVector& p,
                           const SolveConfig& cfg = {}) {
  const UtilitySpec uk = rescale(u, static_cast<double>(p.size()));
  const EntropyReport rep = h_u(uk, p, cfg);
  return ExtReal(uk.eval(1.0) - uk.eval(std::exp(-rep.entropy.value())));
}

/// The defining arithmetic of the FHS U-entropy, kept as an independent
/// route for verification.
inline ExtReal fhs_entropy_definition(const UtilitySpec& u, const ProbVector& p,
                                      const SolveConfig& cfg = {}) {
  const double k = static_cast<double>(p.size());
  const ExtReal d = fhs_relative(u, p, ProbVector::uniform(p.size()), cfg);
  return ExtReal(u.eval(k) - u.eval(1.0)) - d;
}

/// Arimoto entropy inf_{w in S_k} sum_i f(w_i) p_i with f = -u, which equals
/// -n_u(p) = -u(e^{-h_u(p)}). Requires u(1) = 0; pass auto_normalize to
/// shift by -u(1) instead of throwing.
inline ExtReal arimoto(const UtilitySpec& u, const ProbVector& p, bool auto_normalize = false,
                       const SolveConfig& cfg = {}) {
  const double u1 = u.eval(1.0);
  if (std::abs(u1) > 1e-12) {
    if (!auto_normalize)
      throw NotNormalized("arimoto requires u(1) = 0 (got u(1) = " + std::to_string(u1) +
                          "); apply affine(1, -u(1)) or pass auto_normalize");
    return arimoto(affine_transform(u, 1.0, -u1), p, false, cfg);
  }
  return -n_u(u, p, cfg).value;
}

/// Frittelli generalised distance. delta_cap is
/// Delta_u(mu, nu) = extremum over Lambda > 0 of
/// Lambda + sum_i u*(Lambda mu_i / nu_i) nu_i, taken at the interior
/// stationary point (the dual objective is convex in Lambda, so this is its
/// minimum; the value coincides with N_u(nu || mu)). distance is
/// delta_u = u^{-1}(Delta_u) - 1 = e^{H_u(nu || mu)} - 1.
struct FrittelliResult {
  ExtReal delta_cap;
  ExtReal distance;
  double lambda_star = 0.0;  // stationary multiplier of the a.c. subproblem
};

inline FrittelliResult frittelli(const UtilitySpec& u, const ProbVector& mu,
                                 const ProbVector& nu, const SolveConfig& cfg = {}) {
  if (!absolutely_continuous(mu, nu))
    throw NotAbsolutelyContinuous("frittelli requires mu << nu");
  // Split nu against mu; mu << nu makes mu and the a.c. part equivalent, so
  // the singular mass (mass of nu on mu-null atoms) is < 1.
  const Decomposition d = lebesgue_decompose(nu, mu);
  const std::size_t m = d.support.size();
  std::vector<double> ratio(m, 0.0);  // d(mu)/d(nu_ac) on the common support
  for (std::size_t j = 0; j < m; ++j) ratio[j] = mu[d.support[j]] / d.ac_normalized[j];

  auto dual_objective = [&](double lam) -> ExtReal {
    double s = lam;
    for (std::size_t j = 0; j < m; ++j)
      s += convex_dual(u, ExtReal(lam * ratio[j])).value() * d.ac_normalized[j];
    return ExtReal(s);
  };
  const MaximizeResult inner =
      maximize_concave_1d([&](double lam) { return -dual_objective(lam); }, 1.0, cfg);
  const ExtReal delta_inner = -inner.value;

  const ExtReal delta = d.singular_mass * u.u_at_infinity + (1.0 - d.singular_mass) * delta_inner;
  ExtReal dist = ExtReal::pos_inf();
  if (delta.is_finite() &&
      (!u.u_at_infinity.is_finite() || delta.value() < u.u_at_infinity.value()))
    dist = ExtReal(u.inverse(delta.value()) - 1.0);
  return {delta, dist, inner.argmax};
}

}  // namespace uentropy
