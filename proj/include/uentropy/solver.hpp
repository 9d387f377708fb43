#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "uentropy/errors.hpp"
#include "uentropy/ext_real.hpp"
#include "uentropy/prob_vector.hpp"
#include "uentropy/utility.hpp"

namespace uentropy {

struct SolveConfig {
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  int max_iter = 200;
  double bracket_growth = 2.0;

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || max_iter < 8 || !(bracket_growth > 1.0))
      throw Error("SolveConfig: need rel_tol > 0, abs_tol > 0, max_iter >= 8, growth > 1");
  }
};

/// Result of the dual-multiplier solve: the multiplier itself, the residual
/// of the budget equation at the returned point, and the iteration count.
struct LambdaSolution {
  double lambda = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

namespace detail {

// Bisection for phi(x) = target where phi is continuous and strictly
// decreasing. [lo, hi] must bracket the root on entry. Runs the bracket all
// the way down to adjacent doubles (the extra ~15 halvings past rel_tol are
// cheaper than a premature multiplier feeding every downstream sum), then
// reports the point with the smallest residual seen.
inline LambdaSolution bisect_bracketed(const std::function<double(double)>& phi,
                                       double target, double lo, double hi,
                                       const SolveConfig& cfg) {
  double best_x = lo;
  double best_r = phi(lo) - target;
  int it = 0;
  for (; it < cfg.max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket already at double resolution
    const double r = phi(mid) - target;
    if (std::abs(r) < std::abs(best_r)) {
      best_x = mid;
      best_r = r;
    }
    if (r == 0.0) return {mid, 0.0, it + 1};
    (r > 0.0 ? lo : hi) = mid;
  }
  if (std::abs(best_r) <= cfg.rel_tol || hi - lo <= cfg.abs_tol + cfg.rel_tol * std::abs(best_x))
    return {best_x, best_r, it};
  throw NoConvergence("bisection: max_iter=" + std::to_string(cfg.max_iter) +
                      " exhausted, best bracket [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
}

// Variant with a hard lower edge: phi(lo) >= target is asserted (the
// existence proof guarantees it), and the upper edge is grown geometrically.
inline LambdaSolution bisect_decreasing_from(const std::function<double(double)>& phi,
                                             double target, double lo,
                                             const SolveConfig& cfg) {
  cfg.validate();
  const double r_lo = phi(lo) - target;
  if (r_lo < -1e-9 * std::max(1.0, std::abs(target)))
    throw NoConvergence("bisection: phi at the lower edge is " + std::to_string(r_lo + target) +
                        " < target " + std::to_string(target));
  if (r_lo <= 0.0) return {lo, r_lo, 0};  // root sits at the edge
  double hi = lo * cfg.bracket_growth;
  int guard = 0;
  while (phi(hi) >= target) {
    hi *= cfg.bracket_growth;
    if (++guard > cfg.max_iter || std::isinf(hi))
      throw NoConvergence("bisection: could not bracket above lo=" + std::to_string(lo));
  }
  return bisect_bracketed(phi, target, lo, hi, cfg);
}

// Variant for a free-standing root: the bracket is grown in both directions
// from a positive seed.
inline LambdaSolution bisect_decreasing_two_sided(const std::function<double(double)>& phi,
                                                  double target, double seed,
                                                  const SolveConfig& cfg) {
  cfg.validate();
  double lo = seed;
  int guard = 0;
  while (phi(lo) < target) {
    lo /= cfg.bracket_growth;
    if (++guard > 4 * cfg.max_iter || lo == 0.0)
      throw NoConvergence("bisection: no lower bracket below seed=" + std::to_string(seed));
  }
  double hi = std::max(seed, lo * cfg.bracket_growth);
  guard = 0;
  while (phi(hi) >= target) {
    hi *= cfg.bracket_growth;
    if (++guard > 4 * cfg.max_iter || std::isinf(hi))
      throw NoConvergence("bisection: no upper bracket above seed=" + std::to_string(seed));
  }
  return bisect_bracketed(phi, target, lo, hi, cfg);
}

}  // namespace detail

/// Solves sum_i I(Lambda / p_i) = 1 for the unique dual multiplier
/// Lambda_p >= alpha(p) = u'(1) * max_j p_j. Atoms with p_i = 0 contribute
/// I(inf) = 0 and are skipped. Bisection is used throughout: phi_p is
/// strictly decreasing and continuous, so convergence is guaranteed, and I
/// may have an unbounded derivative near the bracket edge where Newton steps
/// misbehave.
inline LambdaSolution solve_lambda(const UtilitySpec& u, const ProbVector& p,
                                   const SolveConfig& cfg = {}) {
  const auto active = p.support();
  if (active.empty()) throw DegenerateInput("solve_lambda: all weights are zero");
  const double alpha = u.marginal(1.0) * p.max_weight();
  auto phi = [&](double lam) {
    double s = 0.0;
    for (std::size_t i : active) s += u.inverse_marginal(lam / p[i]);
    return s;
  };
  return detail::bisect_decreasing_from(phi, 1.0, alpha, cfg);
}

/// Result of the scalar concave maximization. at_boundary is set when the
/// function kept growing toward an edge of the admissible domain (0, inf)
/// and the reported argmax is the bracket edge reached, not a stationary
/// point.
struct MaximizeResult {
  double argmax = 0.0;
  ExtReal value;
  bool at_boundary = false;
  int iterations = 0;
};

/// Golden-section maximizer for a concave f on (0, inf). The bracket is
/// grown geometrically from the initial guess until an interior maximum is
/// straddled. Evaluations that overflow or produce NaN count as -inf, which
/// shrinks the admissible bracket instead of aborting the search.
inline MaximizeResult maximize_concave_1d(const std::function<ExtReal(double)>& f,
                                          double initial_guess, const SolveConfig& cfg = {}) {
  cfg.validate();
  if (!(initial_guess > 0.0))
    throw Error("maximize_concave_1d: initial guess must be positive");
  const double overflow = 1e250;

  auto safe_eval = [&](double x) -> ExtReal {
    try {
      return f(x);
    } catch (const std::domain_error&) {  // NaN from overflowing user arithmetic
      return ExtReal::neg_inf();
    }
  };

  double a = initial_guess / cfg.bracket_growth;
  double b = initial_guess;
  double c = initial_guess * cfg.bracket_growth;
  ExtReal fa = safe_eval(a), fb = safe_eval(b), fc = safe_eval(c);

  // Enough geometric steps to sweep the whole double range before giving up.
  const int max_expand =
      64 + static_cast<int>(std::ceil(600.0 * std::log(10.0) / std::log(cfg.bracket_growth)));
  int expand = 0;
  while (fc > fb) {  // still climbing to the right
    a = b; fa = fb;
    b = c; fb = fc;
    c *= cfg.bracket_growth;
    if (fb.is_pos_inf() || c > overflow || (fb.is_finite() && fb.value() > overflow))
      throw UnboundedAbove("maximize_concave_1d: objective grows without bound");
    fc = safe_eval(c);
    if (++expand > max_expand)
      throw NoConvergence("maximize_concave_1d: bracket expansion stalled");
  }
  while (fa > fb) {  // still climbing to the left
    c = b; fc = fb;
    b = a; fb = fa;
    a /= cfg.bracket_growth;
    if (a < 1e-280 || ++expand > max_expand)
      return {b, fb, true, expand};  // supremum pushed to the 0 edge
    fa = safe_eval(a);
  }

  // Golden-section on [a, c] with the peak known to be interior.
  const double invphi = 0.6180339887498949;
  double x1 = c - invphi * (c - a);
  double x2 = a + invphi * (c - a);
  ExtReal f1 = safe_eval(x1), f2 = safe_eval(x2);
  int it = 0;
  for (; it < cfg.max_iter; ++it) {
    if (c - a <= cfg.abs_tol + cfg.rel_tol * std::max(std::abs(a), std::abs(c))) break;
    if (f1 > f2) {
      c = x2;
      x2 = x1; f2 = f1;
      x1 = c - invphi * (c - a);
      f1 = safe_eval(x1);
    } else {
      a = x1;
      x1 = x2; f1 = f2;
      x2 = a + invphi * (c - a);
      f2 = safe_eval(x2);
    }
    if (x1 >= x2) break;  // interval exhausted at double resolution
  }
  const double xm = 0.5 * (a + c);
  return {xm, safe_eval(xm), false, it};
}

}  // namespace uentropy
