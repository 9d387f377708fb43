#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "uentropy/errors.hpp"

namespace uentropy {

/// A probability vector on a finite sample space: nonnegative weights that
/// sum to 1. Inputs within 1e-9 of unit mass are renormalized silently
/// (round-trip noise); anything farther off is rejected unless the caller
/// passes renormalize = true.
class ProbVector {
 public:
  explicit ProbVector(std::vector<double> weights, bool renormalize = false)
      : w_(std::move(weights)) {
    if (w_.empty()) throw InvalidProbVector("probability vector must be non-empty");
    double sum = 0.0;
    for (double& wi : w_) {
      if (std::isnan(wi)) throw InvalidProbVector("probability vector contains NaN");
      if (wi < 0.0) {
        if (wi < -1e-12)
          throw InvalidProbVector("negative weight " + std::to_string(wi));
        wi = 0.0;
      }
      sum += wi;
    }
    if (!(sum > 0.0) || std::isinf(sum))
      throw InvalidProbVector("probability vector has no positive finite mass");
    if (std::abs(sum - 1.0) > 1e-9 && !renormalize)
      throw InvalidProbVector("weights sum to " + std::to_string(sum) +
                              "; pass renormalize to accept");
    // Rescale only beyond accumulated rounding: normalization is then
    // idempotent, so re-ingesting emitted vectors reproduces them exactly.
    if (std::abs(sum - 1.0) > 4e-16 * static_cast<double>(w_.size()))
      for (double& wi : w_) wi /= sum;
  }

  static ProbVector uniform(std::size_t k) {
    return ProbVector(std::vector<double>(k, 1.0 / static_cast<double>(k)));
  }

  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  const std::vector<double>& weights() const { return w_; }

  double max_weight() const { return *std::max_element(w_.begin(), w_.end()); }

  std::vector<std::size_t> support() const {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] > 0.0) s.push_back(i);
    return s;
  }

  auto begin() const { return w_.begin(); }
  auto end() const { return w_.end(); }

 private:
  std::vector<double> w_;
};

/// p << q on a finite space: every q-null atom is p-null.
inline bool absolutely_continuous(const ProbVector& p, const ProbVector& q) {
  if (p.size() != q.size())
    throw LengthMismatch("vectors have lengths " + std::to_string(p.size()) + " and " +
                         std::to_string(q.size()));
  for (std::size_t i = 0; i < p.size(); ++i)
    if (q[i] == 0.0 && p[i] > 0.0) return false;
  return true;
}

}  // namespace uentropy
