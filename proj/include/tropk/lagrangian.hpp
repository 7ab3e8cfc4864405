#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tropk/ext_real.hpp"
#include "tropk/grid.hpp"

namespace tropk {

/// Running cost L(s, r, v) of a trajectory.
class Lagrangian {
 public:
  enum class Kind { quadratic, absolute, table, custom };
  using Fn = std::function<double(double s, std::span<const double> r, std::span<const double> v)>;

  /// scale * ||v||_2^2
  static Lagrangian quadratic(double scale = 1.0);
  /// scale * ||v||_1
  static Lagrangian absolute(double scale = 1.0);
  /// Piecewise-linear interpolation of (velocity, value) samples for scalar
  /// velocities; +inf outside the tabulated range.
  static Lagrangian table(std::vector<double> velocities, std::vector<double> values);
  /// Arbitrary L. `convex` and `state_independent` are trusted as given.
  static Lagrangian custom(Fn fn, bool convex, bool state_independent, std::string name = "custom");

  double operator()(double s, std::span<const double> r, std::span<const double> v) const;
  double operator()(std::span<const double> v) const { return (*this)(0.0, {}, v); }

  Kind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  double scale() const noexcept { return scale_; }
  const std::vector<double>& table_velocities() const noexcept { return vel_; }
  const std::vector<double>& table_values() const noexcept { return val_; }

  bool convex() const noexcept { return convex_; }
  bool state_independent() const noexcept { return state_independent_; }
  /// Whether every tabulated / closed-form value is >= 0. Custom
  /// Lagrangians report false; callers probe them on their grid.
  bool known_nonnegative() const noexcept;

 private:
  Kind kind_ = Kind::quadratic;
  std::string name_ = "quadratic";
  double scale_ = 1.0;
  std::vector<double> vel_, val_;
  Fn fn_;
  bool convex_ = true;
  bool state_independent_ = true;
};

/// Closed-form least action between spacetime points x0 = (t0, r0) and
/// x1 = (t1, r1) for a convex state-independent Lagrangian:
///   -|t1 - t0| L((r1 - r0) / (t1 - t0))   if t1 != t0,
///   0 if x0 == x1,  -inf if t0 == t1 and r0 != r1.
ExtReal lax_hopf(const Lagrangian& lagrangian, std::span<const double> x0, std::span<const double> x1);

}  // namespace tropk
