#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace uentropy {

/// Extended real value in [-inf, +inf] with the convention 0 * (+-inf) = 0.
///
/// Kept as an explicit three-state type rather than raw IEEE doubles: native
/// floating point yields NaN for 0 * inf, while every decomposition formula
/// here needs mass-weighted sums where a zero weight kills an infinite term.
class ExtReal {
 public:
  constexpr ExtReal() = default;

  // Maps IEEE infinities to the corresponding state; NaN is rejected and
  // -0.0 is canonicalized so rendered values never carry a stray sign.
  ExtReal(double v) {
    if (std::isnan(v)) throw std::domain_error("ExtReal: NaN is not an extended real");
    if (std::isinf(v)) {
      state_ = v > 0 ? State::PosInf : State::NegInf;
      value_ = 0.0;
    } else {
      state_ = State::Finite;
      value_ = v == 0.0 ? 0.0 : v;
    }
  }

  static ExtReal pos_inf() {
    ExtReal r;
    r.state_ = State::PosInf;
    return r;
  }
  static ExtReal neg_inf() {
    ExtReal r;
    r.state_ = State::NegInf;
    return r;
  }

  bool is_finite() const { return state_ == State::Finite; }
  bool is_pos_inf() const { return state_ == State::PosInf; }
  bool is_neg_inf() const { return state_ == State::NegInf; }
  bool is_inf() const { return state_ != State::Finite; }

  /// Finite value; throws on an infinite state.
  double value() const {
    if (!is_finite()) throw std::domain_error("ExtReal: value() on infinite value");
    return value_;
  }

  /// Lossy view as a double (IEEE infinities for the infinite states).
  double as_double() const {
    switch (state_) {
      case State::PosInf: return std::numeric_limits<double>::infinity();
      case State::NegInf: return -std::numeric_limits<double>::infinity();
      default: return value_;
    }
  }

  friend ExtReal operator-(ExtReal x) {
    if (x.is_pos_inf()) return neg_inf();
    if (x.is_neg_inf()) return pos_inf();
    return ExtReal(-x.value_);
  }

  friend ExtReal operator+(ExtReal a, ExtReal b) {
    if (a.is_finite() && b.is_finite()) return ExtReal(a.value_ + b.value_);
    if (a.is_finite()) return b;
    if (b.is_finite()) return a;
    if (a.state_ == b.state_) return a;
    throw std::domain_error("ExtReal: inf + (-inf) is undefined");
  }

  friend ExtReal operator-(ExtReal a, ExtReal b) { return a + (-b); }

  /// Scalar product with the 0 * (+-inf) = 0 convention.
  friend ExtReal operator*(double c, ExtReal x) {
    if (std::isnan(c)) throw std::domain_error("ExtReal: NaN scalar");
    if (x.is_finite()) return ExtReal(c * x.value_);
    if (c == 0.0) return ExtReal(0.0);
    return (c > 0) == x.is_pos_inf() ? pos_inf() : neg_inf();
  }
  friend ExtReal operator*(ExtReal x, double c) { return c * x; }

  friend bool operator==(ExtReal a, ExtReal b) {
    if (a.state_ != b.state_) return false;
    return !a.is_finite() || a.value_ == b.value_;
  }
  friend bool operator!=(ExtReal a, ExtReal b) { return !(a == b); }
  friend bool operator<(ExtReal a, ExtReal b) {
    if (a.state_ == b.state_) return a.is_finite() && a.value_ < b.value_;
    if (a.is_neg_inf() || b.is_pos_inf()) return true;
    return false;
  }
  friend bool operator>(ExtReal a, ExtReal b) { return b < a; }
  friend bool operator<=(ExtReal a, ExtReal b) { return !(b < a); }
  friend bool operator>=(ExtReal a, ExtReal b) { return !(a < b); }

  /// "inf" / "-inf" for the infinite states, full precision otherwise.
  std::string str() const {
    if (is_pos_inf()) return "inf";
    if (is_neg_inf()) return "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value_);
    return buf;
  }

  friend std::ostream& operator<<(std::ostream& os, ExtReal x) { return os << x.str(); }

 private:
  enum class State { Finite, PosInf, NegInf };
  State state_ = State::Finite;
  double value_ = 0.0;
};

}  // namespace uentropy
