#include "tropk/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tropk/errors.hpp"

namespace tropk {

Lagrangian Lagrangian::quadratic(double scale) {
  if (!(scale >= 0.0)) throw precondition_error("quadratic Lagrangian: scale must be >= 0");
  Lagrangian l;
  l.kind_ = Kind::quadratic;
  l.name_ = "quadratic";
  l.scale_ = scale;
  return l;
}

Lagrangian Lagrangian::absolute(double scale) {
  if (!(scale >= 0.0)) throw precondition_error("absolute Lagrangian: scale must be >= 0");
  Lagrangian l;
  l.kind_ = Kind::absolute;
  l.name_ = "absolute";
  l.scale_ = scale;
  return l;
}

Lagrangian Lagrangian::table(std::vector<double> velocities, std::vector<double> values) {
  if (velocities.size() != values.size() || velocities.empty())
    throw precondition_error("table Lagrangian: need matching, nonempty velocity and value lists");
  if (!std::is_sorted(velocities.begin(), velocities.end()) ||
      std::adjacent_find(velocities.begin(), velocities.end()) != velocities.end())
    throw precondition_error("table Lagrangian: velocities must be strictly increasing");
  Lagrangian l;
  l.kind_ = Kind::table;
  l.name_ = "table";
  l.vel_ = std::move(velocities);
  l.val_ = std::move(values);
  // Convex iff consecutive slopes are nondecreasing.
  l.convex_ = true;
  for (std::size_t i = 2; i < l.vel_.size(); ++i) {
    const double s0 = (l.val_[i - 1] - l.val_[i - 2]) / (l.vel_[i - 1] - l.vel_[i - 2]);
    const double s1 = (l.val_[i] - l.val_[i - 1]) / (l.vel_[i] - l.vel_[i - 1]);
    if (s1 < s0 - 1e-12) l.convex_ = false;
  }
  return l;
}

Lagrangian Lagrangian::custom(Fn fn, bool convex, bool state_independent, std::string name) {
  Lagrangian l;
  l.kind_ = Kind::custom;
  l.name_ = std::move(name);
  l.fn_ = std::move(fn);
  l.convex_ = convex;
  l.state_independent_ = state_independent;
  return l;
}

double Lagrangian::operator()(double s, std::span<const double> r, std::span<const double> v) const {
  switch (kind_) {
    case Kind::quadratic: {
      double acc = 0.0;
      for (double c : v) acc += c * c;
      return scale_ * acc;
    }
    case Kind::absolute: {
      double acc = 0.0;
      for (double c : v) acc += std::abs(c);
      return scale_ * acc;
    }
    case Kind::table: {
      if (v.size() != 1) throw precondition_error("table Lagrangian: scalar velocities only");
      const double x = v[0];
      constexpr double eps = 1e-12;
      if (x < vel_.front() - eps || x > vel_.back() + eps) return std::numeric_limits<double>::infinity();
      auto it = std::upper_bound(vel_.begin(), vel_.end(), x);
      if (it == vel_.begin()) return val_.front();
      if (it == vel_.end()) return val_.back();
      const auto i = static_cast<std::size_t>(it - vel_.begin());
      const double w = (x - vel_[i - 1]) / (vel_[i] - vel_[i - 1]);
      return (1.0 - w) * val_[i - 1] + w * val_[i];
    }
    case Kind::custom:
      return fn_(s, r, v);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

bool Lagrangian::known_nonnegative() const noexcept {
  switch (kind_) {
    case Kind::quadratic:
    case Kind::absolute:
      return true;
    case Kind::table:
      return std::all_of(val_.begin(), val_.end(), [](double x) { return x >= 0.0; });
    case Kind::custom:
      return false;
  }
  return false;
}

ExtReal lax_hopf(const Lagrangian& lagrangian, std::span<const double> x0, std::span<const double> x1) {
  if (!lagrangian.convex() || !lagrangian.state_independent())
    throw precondition_error("lax_hopf: Lagrangian must be convex and state-independent");
  if (x0.size() != x1.size() || x0.size() < 2)
    throw domain_error("lax_hopf: expected spacetime points (t, r...) of equal dimension");
  const double dt = x1[0] - x0[0];
  const std::size_t d = x0.size() - 1;
  std::vector<double> dr(d);
  bool same_r = true;
  for (std::size_t k = 0; k < d; ++k) {
    dr[k] = x1[k + 1] - x0[k + 1];
    if (dr[k] != 0.0) same_r = false;
  }
  if (dt == 0.0) return same_r ? ExtReal(0.0) : ExtReal::neg_inf();
  std::vector<double> v(d);
  for (std::size_t k = 0; k < d; ++k) v[k] = dr[k] / dt;
  const double cost = lagrangian(v);
  if (std::isinf(cost)) return ExtReal::neg_inf();
  return ExtReal(-std::abs(dt) * cost);
}

}  // namespace tropk
