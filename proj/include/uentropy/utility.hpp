#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uentropy/errors.hpp"
#include "uentropy/ext_real.hpp"

namespace uentropy {

/// A utility function u on (0, inf): strictly increasing, strictly concave,
/// continuously differentiable, with Inada marginals (u'(0+) = inf,
/// u'(inf) = 0), together with the derived maps the entropy engine needs.
///
/// Immutable after construction; all members are pure functions, so a spec
/// may be shared freely across threads.
struct UtilitySpec {
  std::function<double(double)> eval;              // u(x), x > 0
  std::function<double(double)> marginal;          // u'(x)
  std::function<double(double)> inverse;           // u^{-1}(y), y in (u(0), u(inf))
  std::function<double(double)> inverse_marginal;  // I(y) = (u')^{-1}(y), y > 0
  ExtReal u_at_zero;                               // lim_{x->0+} u(x)
  ExtReal u_at_infinity;                           // lim_{x->inf} u(x)
  std::string label;

  // Exact asymptotic elasticity for the closed-form families; estimators
  // are used when absent.
  std::optional<double> exact_elasticity;
};

enum class UtilityFamily { Log, Isoelastic };

namespace detail {

// Monotone bisection inverse for custom specs. The bracket starts at
// [1e-12, 1e12] and doubles outward until it straddles the target.
inline double invert_monotone(const std::function<double(double)>& f, double y,
                              bool increasing) {
  const double rel_tol = 1e-12;
  double lo = 1e-12, hi = 1e12;
  auto below = [&](double x) {  // f(x) <= y on the "low" side of the root
    double v = f(x);
    return increasing ? v <= y : v >= y;
  };
  int guard = 0;
  while (!below(lo)) {
    lo *= 0.5;
    if (++guard > 1020 || lo == 0.0)
      throw NoConvergence("invert_monotone: no lower bracket for y=" + std::to_string(y));
  }
  guard = 0;
  while (below(hi)) {
    hi *= 2.0;
    if (++guard > 1020 || std::isinf(hi))
      throw NoConvergence("invert_monotone: no upper bracket for y=" + std::to_string(y));
  }
  for (int it = 0; it < 400; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (below(mid) ? lo : hi) = mid;
    if (hi - lo <= rel_tol * mid) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Logarithmic utility u(x) = ln x.
inline UtilitySpec log_utility() {
  UtilitySpec u;
  u.eval = [](double x) { return std::log(x); };
  u.marginal = [](double x) { return 1.0 / x; };
  u.inverse = [](double y) { return std::exp(y); };
  u.inverse_marginal = [](double y) { return 1.0 / y; };
  u.u_at_zero = ExtReal::neg_inf();
  u.u_at_infinity = ExtReal::pos_inf();
  u.label = "log";
  u.exact_elasticity = 0.0;
  return u;
}

/// Isoelastic (power) utility u(x) = (x^gamma - 1) / gamma, gamma < 1, != 0.
inline UtilitySpec isoelastic_utility(double gamma) {
  if (!(gamma < 1.0) || gamma == 0.0)
    throw InvalidGamma("isoelastic utility requires gamma in (-inf,0) U (0,1), got " +
                       std::to_string(gamma));
  UtilitySpec u;
  u.eval = [gamma](double x) { return (std::pow(x, gamma) - 1.0) / gamma; };
  u.marginal = [gamma](double x) { return std::pow(x, gamma - 1.0); };
  u.inverse = [gamma](double y) { return std::pow(gamma * y + 1.0, 1.0 / gamma); };
  u.inverse_marginal = [gamma](double y) { return std::pow(y, 1.0 / (gamma - 1.0)); };
  u.u_at_zero = gamma > 0 ? ExtReal(-1.0 / gamma) : ExtReal::neg_inf();
  u.u_at_infinity = gamma < 0 ? ExtReal(-1.0 / gamma) : ExtReal::pos_inf();
  u.label = "iso:" + std::to_string(gamma);
  u.exact_elasticity = gamma > 0 ? gamma : 0.0;
  return u;
}

inline UtilitySpec make_builtin(UtilityFamily family, std::optional<double> gamma = {}) {
  if (family == UtilityFamily::Log) return log_utility();
  if (!gamma) throw InvalidGamma("isoelastic utility requires a gamma parameter");
  return isoelastic_utility(*gamma);
}

/// a*u + b, a > 0. Entropies are invariant under this transform.
inline UtilitySpec affine_transform(UtilitySpec base, double a, double b) {
  if (!(a > 0.0)) throw InvalidScale("affine transform requires a > 0, got " + std::to_string(a));
  UtilitySpec u;
  u.eval = [base, a, b](double x) { return a * base.eval(x) + b; };
  u.marginal = [base, a](double x) { return a * base.marginal(x); };
  u.inverse = [base, a, b](double y) { return base.inverse((y - b) / a); };
  u.inverse_marginal = [base, a](double y) { return base.inverse_marginal(y / a); };
  u.u_at_zero = a * base.u_at_zero + ExtReal(b);
  u.u_at_infinity = a * base.u_at_infinity + ExtReal(b);
  u.label = "affine(" + std::to_string(a) + "," + std::to_string(b) + "):" + base.label;
  return u;
}

/// u_k(x) = u(k*x), k > 0, the budget-rescaled utility.
inline UtilitySpec rescale(UtilitySpec base, double k) {
  if (!(k > 0.0)) throw InvalidScale("rescale requires k > 0, got " + std::to_string(k));
  UtilitySpec u;
  u.eval = [base, k](double x) { return base.eval(k * x); };
  u.marginal = [base, k](double x) { return k * base.marginal(k * x); };
  u.inverse = [base, k](double y) { return base.inverse(y) / k; };
  u.inverse_marginal = [base, k](double y) { return base.inverse_marginal(y / k) / k; };
  u.u_at_zero = base.u_at_zero;
  u.u_at_infinity = base.u_at_infinity;
  u.label = "rescale(" + std::to_string(k) + "):" + base.label;
  return u;
}

/// Builds a spec from eval + marginal only; inverse and inverse-marginal are
/// synthesized by monotone bisection (relative tolerance 1e-12).
inline UtilitySpec make_custom(std::function<double(double)> eval,
                               std::function<double(double)> marginal,
                               ExtReal u_at_zero, ExtReal u_at_infinity,
                               std::string label) {
  UtilitySpec u;
  u.eval = eval;
  u.marginal = marginal;
  u.inverse = [eval](double y) { return detail::invert_monotone(eval, y, true); };
  u.inverse_marginal = [marginal](double y) {
    return detail::invert_monotone(marginal, y, false);
  };
  u.u_at_zero = u_at_zero;
  u.u_at_infinity = u_at_infinity;
  u.label = std::move(label);
  return u;
}

/// Convex dual u*(y) = sup_{x>0} (u(x) - y*x), with the boundary conventions
/// u*(0) = u(inf) and u*(inf) = u(0).
inline ExtReal convex_dual(const UtilitySpec& u, ExtReal y) {
  if (y.is_neg_inf() || (y.is_finite() && y.value() < 0.0))
    throw NegativeArgument("convex_dual requires y >= 0");
  if (y.is_pos_inf()) return u.u_at_zero;
  if (y.value() == 0.0) return u.u_at_infinity;
  const double yy = y.value();
  const double x = u.inverse_marginal(yy);  // the sup is attained at I(y)
  return ExtReal(u.eval(x) - yy * x);
}

struct ElasticityEstimate {
  double value = 0.0;
  bool is_exact = false;
  // Set when u changes sign on the sampling grid; the ratio x*u'/u is
  // unstable around the sign change.
  bool low_confidence = false;
};

/// Asymptotic elasticity limsup_{x->inf} x*u'(x)/u(x). Exact for the
/// closed-form families, otherwise a grid estimate. Informational only:
/// the discrete-space results do not need the reasonable-elasticity bound.
inline ElasticityEstimate asymptotic_elasticity(const UtilitySpec& u) {
  if (u.exact_elasticity) return {*u.exact_elasticity, true, false};
  ElasticityEstimate est;
  std::vector<double> ratios;
  bool saw_pos = false, saw_neg = false;
  for (int j = 1; j <= 12; ++j) {
    const double x = std::pow(10.0, j);
    const double ux = u.eval(x);
    if (ux > 1e-12) saw_pos = true;
    if (ux < -1e-12) saw_neg = true;
    if (std::abs(ux) < 1e-12) {
      est.low_confidence = true;
      continue;
    }
    ratios.push_back(x * u.marginal(x) / ux);
  }
  if (saw_pos && saw_neg) est.low_confidence = true;
  if (ratios.empty()) {
    est.low_confidence = true;
    return est;
  }
  // limsup proxy: largest of the last three samples.
  const std::size_t tail = ratios.size() >= 3 ? ratios.size() - 3 : 0;
  double m = ratios[tail];
  for (std::size_t i = tail; i < ratios.size(); ++i) m = std::max(m, ratios[i]);
  est.value = m;
  return est;
}

/// Sampled diagnostic for the utility-function axioms. Empty report == pass.
struct InadaReport {
  std::vector<std::string> monotonicity;  // u or u' not strictly monotone
  std::vector<std::string> concavity;     // midpoint test failures
  std::vector<std::string> round_trip;    // inverse inconsistencies > 1e-8

  bool pass() const { return monotonicity.empty() && concavity.empty() && round_trip.empty(); }
};

inline InadaReport check_inada(const UtilitySpec& u, const std::vector<double>& grid) {
  if (grid.size() < 3) throw BadGrid("check_inada needs a grid of length >= 3");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw BadGrid("check_inada grid entries must be positive");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw BadGrid("check_inada grid must be strictly increasing");
  }
  InadaReport rep;
  auto at = [](double x) { return std::to_string(x); };
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double x0 = grid[i], x1 = grid[i + 1];
    if (!(u.eval(x1) > u.eval(x0)))
      rep.monotonicity.push_back("u not strictly increasing on [" + at(x0) + "," + at(x1) + "]");
    if (!(u.marginal(x1) < u.marginal(x0)))
      rep.monotonicity.push_back("u' not strictly decreasing on [" + at(x0) + "," + at(x1) + "]");
    const double mid = 0.5 * (x0 + x1);
    if (!(u.eval(mid) > 0.5 * (u.eval(x0) + u.eval(x1))))
      rep.concavity.push_back("midpoint concavity fails at x=" + at(mid));
  }
  for (double x : grid) {
    try {
      const double r1 = std::abs(u.inverse(u.eval(x)) - x) / x;
      if (!(r1 <= 1e-8))
        rep.round_trip.push_back("inverse(eval(x)) off by " + at(r1) + " at x=" + at(x));
    } catch (const Error& e) {
      rep.round_trip.push_back("inverse failed at x=" + at(x) + ": " + e.what());
    }
    try {
      const double r2 = std::abs(u.inverse_marginal(u.marginal(x)) - x) / x;
      if (!(r2 <= 1e-8))
        rep.round_trip.push_back("inverse_marginal(marginal(x)) off by " + at(r2) +
                                 " at x=" + at(x));
    } catch (const Error& e) {
      rep.round_trip.push_back("inverse_marginal failed at x=" + at(x) + ": " + e.what());
    }
  }
  return rep;
}

}  // namespace uentropy
