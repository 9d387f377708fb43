#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "uentropy/errors.hpp"
#include "uentropy/ext_real.hpp"
#include "uentropy/prob_vector.hpp"
#include "uentropy/solver.hpp"
#include "uentropy/utility.hpp"

namespace uentropy {

/// Lebesgue decomposition of p against q: the mass of p sitting on q-null
/// atoms (singular part) and the renormalized restriction of p to the
/// support of q (absolutely continuous part).
struct Decomposition {
  double singular_mass = 0.0;
  std::vector<std::size_t> support;   // {i : q_i > 0}
  std::vector<double> ac_normalized;  // parallel to support; empty iff singular_mass == 1
};

inline Decomposition lebesgue_decompose(const ProbVector& p, const ProbVector& q) {
  if (p.size() != q.size())
    throw LengthMismatch("lebesgue_decompose: lengths " + std::to_string(p.size()) + " vs " +
                         std::to_string(q.size()));
  Decomposition d;
  double ac_mass = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (q[i] > 0.0) {
      d.support.push_back(i);
      ac_mass += p[i];
    } else {
      d.singular_mass += p[i];
    }
  }
  // Normalize by the directly summed support mass: when p sits entirely on
  // q-null atoms the rounded singular sum can land a few ulp under 1, but
  // ac_mass is then an exact 0 and the pair is flagged mutually singular.
  if (ac_mass > 0.0) {
    d.ac_normalized.reserve(d.support.size());
    for (std::size_t i : d.support) d.ac_normalized.push_back(p[i] / ac_mass);
  } else {
    d.singular_mass = 1.0;
  }
  return d;
}

/// n_u(p) = sup over probability vectors w of sum_i u(w_i) p_i, together
/// with the multiplier and the maximizing allocation.
struct NuResult {
  ExtReal value;
  LambdaSolution lambda;
  std::vector<double> allocation;  // w*_i = I(Lambda/p_i), 0 on null atoms
};

inline NuResult n_u(const UtilitySpec& u, const ProbVector& p, const SolveConfig& cfg = {}) {
  LambdaSolution sol = solve_lambda(u, p, cfg);
  std::vector<double> w(p.size(), 0.0);
  double primal = 0.0;
  double dual = sol.lambda;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;  // I(Lambda/0) := 0, zero-mass term drops out
    w[i] = u.inverse_marginal(sol.lambda / p[i]);
    // Allocations that underflow to 0 contribute p_i*u(w_i) -> 0 in the same
    // limit; skip instead of evaluating u at 0.
    if (w[i] > 0.0) primal += u.eval(w[i]) * p[i];
    dual += convex_dual(u, ExtReal(sol.lambda / p[i])).value() * p[i];
  }
  if (std::abs(primal - dual) > 1e-9 * (1.0 + std::abs(primal)))
    throw Error("n_u: primal/dual disagreement " + std::to_string(primal) + " vs " +
                std::to_string(dual) + " (lambda=" + std::to_string(sol.lambda) + ")");
  return {ExtReal(primal), sol, std::move(w)};
}

/// Everything one computation produces: the expected-utility optimum, the
/// entropy derived from it, and the solver diagnostics.
struct EntropyReport {
  ExtReal n_value;
  ExtReal entropy;
  std::optional<double> lambda;
  std::optional<std::vector<double>> allocation;
  std::string utility_label;
};

/// Discrete u-entropy h_u(p) = -ln u^{-1}(n_u(p)), in [0, ln k].
inline EntropyReport h_u(const UtilitySpec& u, const ProbVector& p, const SolveConfig& cfg = {}) {
  NuResult r = n_u(u, p, cfg);
  double h = -std::log(u.inverse(r.value.value()));
  if (h < 0.0 && h >= -1e-12) h = 0.0;  // round-off at the point-mass corner
  return {r.value, ExtReal(h), r.lambda.lambda, std::move(r.allocation), u.label};
}

/// N_u(p || q) = sup { sum_i u(w_i) p_i : w_i >= 0, sum_i w_i q_i = 1 },
/// evaluated through the Lebesgue decomposition: singular mass earns u(inf),
/// the absolutely continuous part is solved in closed dual form with
/// w*_i = I(Lambda q_i / p~_i).
struct RelativeResult {
  ExtReal value;
  Decomposition split;
  std::optional<LambdaSolution> lambda;
  // Full-length optimal allocation; present only when p << q (otherwise the
  // supremum is approached, not attained).
  std::optional<std::vector<double>> allocation;
};

inline RelativeResult relative_N(const UtilitySpec& u, const ProbVector& p, const ProbVector& q,
                                 const SolveConfig& cfg = {}) {
  Decomposition d = lebesgue_decompose(p, q);
  if (d.singular_mass >= 1.0) return {u.u_at_infinity, std::move(d), {}, {}};  // p _|_ q

  const std::size_t m = d.support.size();
  double ratio_max = 0.0;
  for (std::size_t j = 0; j < m; ++j)
    if (d.ac_normalized[j] > 0.0)
      ratio_max = std::max(ratio_max, d.ac_normalized[j] / q[d.support[j]]);
  auto psi = [&](double lam) {
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double pj = d.ac_normalized[j];
      if (pj <= 0.0) continue;
      const double qj = q[d.support[j]];
      s += u.inverse_marginal(lam * qj / pj) * qj;
    }
    return s;
  };
  LambdaSolution sol =
      detail::bisect_decreasing_two_sided(psi, 1.0, u.marginal(1.0) * ratio_max, cfg);

  double primal = 0.0;
  double dual = sol.lambda;
  std::vector<double> w_support(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    const double pj = d.ac_normalized[j];
    if (pj <= 0.0) continue;
    const double qj = q[d.support[j]];
    w_support[j] = u.inverse_marginal(sol.lambda * qj / pj);
    if (w_support[j] > 0.0) primal += u.eval(w_support[j]) * pj;
    dual += convex_dual(u, ExtReal(sol.lambda * qj / pj)).value() * pj;
  }
  if (std::abs(primal - dual) > 1e-9 * (1.0 + std::abs(primal)))
    throw Error("relative_N: primal/dual disagreement " + std::to_string(primal) + " vs " +
                std::to_string(dual));

  const ExtReal n = d.singular_mass * u.u_at_infinity + (1.0 - d.singular_mass) * ExtReal(primal);
  std::optional<std::vector<double>> allocation;
  if (d.singular_mass == 0.0) {
    std::vector<double> w(p.size(), 0.0);
    for (std::size_t j = 0; j < m; ++j) w[d.support[j]] = w_support[j];
    allocation = std::move(w);
  }
  return {n, std::move(d), sol, std::move(allocation)};
}

/// Relative u-entropy H_u(p || q) = ln u^{-1}(N_u(p || q)), with
/// H = +inf exactly when N reaches u(inf) (equivalently N = +inf).
inline EntropyReport relative_H(const UtilitySpec& u, const ProbVector& p, const ProbVector& q,
                                const SolveConfig& cfg = {}) {
  RelativeResult r = relative_N(u, p, q, cfg);
  ExtReal H = ExtReal::pos_inf();
  if (r.value.is_finite() &&
      (!u.u_at_infinity.is_finite() || r.value.value() < u.u_at_infinity.value())) {
    double h = std::log(u.inverse(r.value.value()));
    if (h < 0.0 && h >= -1e-12) h = 0.0;  // N = u(1) corner
    H = ExtReal(h);
  }
  std::optional<double> lambda;
  if (r.lambda) lambda = r.lambda->lambda;
  return {r.value, H, lambda, std::move(r.allocation), u.label};
}

namespace detail {

// Maximum of sum_i t[i][m_i] over integer compositions m_1 + ... + m_a = r
// with every m_i >= 1. The tables are per-atom objective values indexed by
// the grid numerator. Supports a <= 4 parts; cost is O(r^(a-1)).
inline double max_over_compositions(const std::vector<std::vector<double>>& t, int r) {
  const std::size_t a = t.size();
  if (a == 1) return t[0][r];
  double best = -std::numeric_limits<double>::infinity();
  if (a == 2) {
    for (int m0 = 1; m0 < r; ++m0) {
      const double v = t[0][m0] + t[1][r - m0];
      if (v > best) best = v;
    }
  } else if (a == 3) {
    for (int m0 = 1; m0 <= r - 2; ++m0) {
      const double c0 = t[0][m0];
      for (int m1 = 1; m1 < r - m0; ++m1) {
        const double v = c0 + t[1][m1] + t[2][r - m0 - m1];
        if (v > best) best = v;
      }
    }
  } else {
    for (int m0 = 1; m0 <= r - 3; ++m0) {
      const double c0 = t[0][m0];
      for (int m1 = 1; m1 <= r - m0 - 2; ++m1) {
        const double c1 = c0 + t[1][m1];
        for (int m2 = 1; m2 < r - m0 - m1; ++m2) {
          const double v = c1 + t[2][m2] + t[3][r - m0 - m1 - m2];
          if (v > best) best = v;
        }
      }
    }
  }
  return best;
}

}  // namespace detail

/// Independent grid oracle for n_u: maximizes over simplex points with
/// denominator `resolution`, forcing w_i >= 1/resolution on the atoms that
/// carry mass. A lower bound on n_u, within O(1/resolution) for smooth u.
/// Cost grows as resolution^(k-1); k is capped at 4.
inline ExtReal brute_force_n_u(const UtilitySpec& u, const ProbVector& p, int resolution) {
  if (p.size() > 4) throw TooLarge("brute_force_n_u supports k <= 4");
  if (resolution < 100) throw Error("brute_force_n_u: resolution must be >= 100");
  const auto active = p.support();
  const int r = resolution;
  std::vector<std::vector<double>> tables;
  tables.reserve(active.size());
  for (std::size_t i : active) {
    std::vector<double> t(static_cast<std::size_t>(r) + 1, 0.0);
    for (int j = 1; j <= r; ++j) t[j] = u.eval(static_cast<double>(j) / r) * p[i];
    tables.push_back(std::move(t));
  }
  return ExtReal(detail::max_over_compositions(tables, r));
}

}  // namespace uentropy
