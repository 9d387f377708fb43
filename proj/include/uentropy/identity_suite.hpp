#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "uentropy/discrete.hpp"
#include "uentropy/related.hpp"

namespace uentropy {

/// Deterministic RNG for verification trials. Doubles are built directly
/// from the mt19937_64 bit stream so runs reproduce across standard-library
/// implementations, not just across invocations.
class TrialRng {
 public:
  explicit TrialRng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  double uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  // xorshift* keeps the generator self-contained and byte-stable.
  std::uint64_t next() {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1DULL;
  }
  std::uint64_t state_;
};

/// Uniform draw from the interior of the simplex (exponential spacings).
inline ProbVector random_simplex(TrialRng& rng, std::size_t k) {
  std::vector<double> w(k);
  double sum = 0.0;
  for (double& wi : w) {
    wi = -std::log(1.0 - rng.uniform01());
    sum += wi;
  }
  for (double& wi : w) wi /= sum;
  return ProbVector(std::move(w), true);
}

/// Simplex draw with `zeros` atoms forced to exactly zero mass.
inline ProbVector random_simplex_with_zeros(TrialRng& rng, std::size_t k, std::size_t zeros) {
  std::vector<double> w(k, 0.0);
  double sum = 0.0;
  for (std::size_t i = zeros; i < k; ++i) {
    w[i] = -std::log(1.0 - rng.uniform01());
    sum += w[i];
  }
  for (double& wi : w) wi /= sum;
  // Shuffle so the null atoms land anywhere.
  for (std::size_t i = k; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i) - 1));
    std::swap(w[i - 1], w[j]);
  }
  return ProbVector(std::move(w), true);
}

/// Per-identity tolerances for the verification suite.
struct IdentityTolerances {
  double fhs_relative = 1e-9;   // D_u vs u(e^H) - u(1) through closed forms
  double fhs_entropy = 1e-9;    // rescaled-h route vs Definition arithmetic
  double arimoto = 1e-9;        // -n_u vs -u(e^{-h}) vs closed forms
  double frittelli = 1e-8;      // Delta vs N, delta vs e^H - 1
  double closed_form = 1e-9;    // h/H vs Shannon/KL/Renyi
  double sharma_mittal = 1e-9;  // isoelastic D_u vs the Sharma-Mittal formula

  void override_all(double t) {
    fhs_relative = fhs_entropy = arimoto = frittelli = closed_form = sharma_mittal = t;
  }
};

/// Max absolute deviations observed for each identity. Identities whose two
/// sides are both infinite (same sign) count as deviation zero; an
/// infinite/finite mismatch is reported as +infinity.
struct IdentityDeviations {
  double fhs_relative = 0.0;
  double fhs_entropy = 0.0;
  double arimoto = 0.0;
  double frittelli_delta = 0.0;
  double frittelli_distance = 0.0;
  double entropy_closed_form = 0.0;
  double relative_closed_form = 0.0;
  double sharma_mittal = 0.0;

  void merge(const IdentityDeviations& o) {
    fhs_relative = std::max(fhs_relative, o.fhs_relative);
    fhs_entropy = std::max(fhs_entropy, o.fhs_entropy);
    arimoto = std::max(arimoto, o.arimoto);
    frittelli_delta = std::max(frittelli_delta, o.frittelli_delta);
    frittelli_distance = std::max(frittelli_distance, o.frittelli_distance);
    entropy_closed_form = std::max(entropy_closed_form, o.entropy_closed_form);
    relative_closed_form = std::max(relative_closed_form, o.relative_closed_form);
    sharma_mittal = std::max(sharma_mittal, o.sharma_mittal);
  }
};

namespace detail {

inline double ext_deviation(ExtReal a, ExtReal b) {
  if (a.is_finite() && b.is_finite()) return std::abs(a.value() - b.value());
  if (a == b) return 0.0;
  return std::numeric_limits<double>::infinity();
}

}  // namespace detail

/// One verification case: a utility (gamma empty means logarithmic), a base
/// vector p, and a reference vector q that may carry null atoms.
struct TrialCase {
  UtilitySpec u;
  std::optional<double> gamma;
  ProbVector p;
  ProbVector q;
};

/// Draws (utility, p, q) with k in [2,6]; roughly one q in four carries null
/// atoms so the singular branches get exercised.
inline TrialCase draw_trial(TrialRng& rng, const std::vector<double>& gammas) {
  const std::size_t k = static_cast<std::size_t>(rng.uniform_int(2, 6));
  const int pick = rng.uniform_int(0, static_cast<int>(gammas.size()));
  std::optional<double> gamma;
  if (pick < static_cast<int>(gammas.size())) gamma = gammas[static_cast<std::size_t>(pick)];
  UtilitySpec u = gamma ? isoelastic_utility(*gamma) : log_utility();
  ProbVector p = random_simplex(rng, k);
  ProbVector q = (rng.uniform_int(0, 3) == 0 && k > 2)
                     ? random_simplex_with_zeros(rng, k, 1 + static_cast<std::size_t>(
                                                                rng.uniform_int(0, 1)))
                     : random_simplex(rng, k);
  return {std::move(u), gamma, std::move(p), std::move(q)};
}

/// Runs every identity of the correspondence diagram on one case and
/// returns the deviations. Identities whose preconditions do not apply to
/// the drawn pair (e.g. D_u with p not << q) are skipped.
inline IdentityDeviations run_identity_trial(const TrialCase& c, const SolveConfig& cfg = {}) {
  IdentityDeviations dev;
  const bool ac = absolutely_continuous(c.p, c.q);
  std::optional<OrderAlpha> order;
  if (c.gamma) order = OrderAlpha::from_gamma(*c.gamma);

  // Closed-form agreement: h_u vs Shannon/Renyi, H_u vs KL/Renyi divergence.
  const EntropyReport hrep = h_u(c.u, c.p, cfg);
  const ExtReal h_closed = order ? renyi(*order, c.p) : shannon(c.p);
  dev.entropy_closed_form = detail::ext_deviation(hrep.entropy, h_closed);

  const EntropyReport Hrep = relative_H(c.u, c.p, c.q, cfg);
  const ExtReal H_closed = order ? renyi(*order, c.p, c.q) : shannon(c.p, c.q);
  dev.relative_closed_form = detail::ext_deviation(Hrep.entropy, H_closed);

  // FHS U-relative entropy against its closed forms (KL for log,
  // Sharma-Mittal for isoelastic).
  if (ac) {
    const ExtReal d_u = fhs_relative(c.u, c.p, c.q, cfg);
    const ExtReal d_closed =
        order ? sharma_mittal(*order, c.p, c.q) : shannon(c.p, c.q);
    dev.fhs_relative = detail::ext_deviation(d_u, d_closed);
    if (order) dev.sharma_mittal = dev.fhs_relative;
  }

  // FHS U-entropy: rescaled-utility route vs the defining arithmetic.
  dev.fhs_entropy =
      detail::ext_deviation(fhs_entropy(c.u, c.p, cfg), fhs_entropy_definition(c.u, c.p, cfg));

  // Arimoto: -n_u(p) against -u(e^{-h_u(p)}) and the U-entropy of the
  // 1/k-rescaled utility.
  {
    const ExtReal a1 = arimoto(c.u, c.p, false, cfg);
    const ExtReal a2 = ExtReal(-c.u.eval(std::exp(-hrep.entropy.value())));
    const ExtReal a3 =
        fhs_entropy(rescale(c.u, 1.0 / static_cast<double>(c.p.size())), c.p, cfg);
    dev.arimoto = std::max(detail::ext_deviation(a1, a2), detail::ext_deviation(a1, a3));
  }

  // Frittelli: the scalar dual search against the constrained-problem route,
  // with q as the pricing measure (q << p holds because p is interior).
  {
    const FrittelliResult fr = frittelli(c.u, c.q, c.p, cfg);
    const RelativeResult rn = relative_N(c.u, c.p, c.q, cfg);
    dev.frittelli_delta = detail::ext_deviation(fr.delta_cap, rn.value);
    ExtReal e_h = ExtReal::pos_inf();
    if (Hrep.entropy.is_finite()) e_h = ExtReal(std::exp(Hrep.entropy.value()) - 1.0);
    dev.frittelli_distance = detail::ext_deviation(fr.distance, e_h);
  }
  return dev;
}

/// Default utility sweep for verification: logarithmic plus the isoelastic
/// orders used throughout the test fixtures.
inline std::vector<double> default_gamma_sweep() {
  return {-2.0, -1.0, -0.5, 0.25, 0.5, 0.75};
}

}  // namespace uentropy
