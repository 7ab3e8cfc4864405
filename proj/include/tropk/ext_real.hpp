#pragma once

/**
 * @file ext_real.hpp
 * @brief Extended reals [-inf, +inf] with Moreau's upper and lower additions.
 *
 * Two additions coexist on the extended line and only differ on the pair
 * {+inf, -inf}:
 *   upper_add(+inf, -inf) = +inf   (+inf absorbing)
 *   lower_add(+inf, -inf) = -inf   (-inf absorbing)
 * Max-plus products use lower_add; residuals and min-plus products use
 * upper_add.
 */

#include <compare>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tropk {

class ExtReal {
 public:
  constexpr ExtReal() noexcept = default;
  ExtReal(double v) : v_(v) {  // NOLINT(google-explicit-constructor)
    if (std::isnan(v)) throw std::domain_error("ExtReal: NaN is not an extended real");
  }

  static constexpr ExtReal pos_inf() noexcept { return ExtReal(raw{}, std::numeric_limits<double>::infinity()); }
  static constexpr ExtReal neg_inf() noexcept { return ExtReal(raw{}, -std::numeric_limits<double>::infinity()); }

  constexpr double value() const noexcept { return v_; }
  constexpr bool is_finite() const noexcept { return v_ != pos_inf_v && v_ != neg_inf_v; }
  constexpr bool is_pos_inf() const noexcept { return v_ == pos_inf_v; }
  constexpr bool is_neg_inf() const noexcept { return v_ == neg_inf_v; }

  constexpr auto operator<=>(const ExtReal& o) const noexcept { return v_ <=> o.v_; }
  constexpr bool operator==(const ExtReal& o) const noexcept = default;

  std::string to_string() const;

 private:
  struct raw {};
  constexpr ExtReal(raw, double v) noexcept : v_(v) {}

  static constexpr double pos_inf_v = std::numeric_limits<double>::infinity();
  static constexpr double neg_inf_v = -std::numeric_limits<double>::infinity();

  double v_ = 0.0;
};

inline ExtReal negate(ExtReal a) noexcept {
  return a.is_pos_inf() ? ExtReal::neg_inf() : a.is_neg_inf() ? ExtReal::pos_inf() : ExtReal(-a.value());
}

// +inf absorbing.
inline ExtReal upper_add(ExtReal a, ExtReal b) noexcept {
  if (a.is_pos_inf() || b.is_pos_inf()) return ExtReal::pos_inf();
  if (a.is_neg_inf() || b.is_neg_inf()) return ExtReal::neg_inf();
  return ExtReal(a.value() + b.value());
}

// -inf absorbing.
inline ExtReal lower_add(ExtReal a, ExtReal b) noexcept {
  if (a.is_neg_inf() || b.is_neg_inf()) return ExtReal::neg_inf();
  if (a.is_pos_inf() || b.is_pos_inf()) return ExtReal::pos_inf();
  return ExtReal(a.value() + b.value());
}

inline ExtReal upper_sub(ExtReal a, ExtReal b) noexcept { return upper_add(a, negate(b)); }
inline ExtReal lower_sub(ExtReal a, ExtReal b) noexcept { return lower_add(a, negate(b)); }

// Multiplication by a finite positive scalar; infinities are preserved.
inline ExtReal scale(ExtReal a, double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw std::domain_error("ExtReal scale: factor must be finite and positive");
  return a.is_finite() ? ExtReal(a.value() * s) : a;
}

inline ExtReal half(ExtReal a) { return scale(a, 0.5); }

inline ExtReal max(ExtReal a, ExtReal b) noexcept { return a < b ? b : a; }
inline ExtReal min(ExtReal a, ExtReal b) noexcept { return b < a ? b : a; }

/// Equality up to an absolute tolerance on finite values. Infinite values
/// are only equal to the same infinity.
inline bool approx_equal(ExtReal a, ExtReal b, double tol) noexcept {
  if (a.is_finite() && b.is_finite()) return std::abs(a.value() - b.value()) <= tol;
  return a == b;
}

/// `a <= b` allowing finite slack `tol`.
inline bool approx_le(ExtReal a, ExtReal b, double tol) noexcept {
  if (a <= b) return true;
  return a.is_finite() && b.is_finite() && a.value() <= b.value() + tol;
}

}  // namespace tropk
