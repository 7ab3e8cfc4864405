#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "tropk/ext_real.hpp"

namespace tropk {

using Point = std::vector<double>;

/// Finite ordered set of distinct points of R^d. When `spacetime` is set,
/// coordinate 0 is time and the rest is space.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::vector<Point> points, bool spacetime = false);

  /// Regular 1-D grid lo, lo+step, ..., hi (inclusive up to rounding).
  static PointSet uniform_1d(double lo, double hi, double step);
  static PointSet from_scalars(std::span<const double> xs);

  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  std::size_t dim() const noexcept { return dim_; }
  bool spacetime() const noexcept { return spacetime_; }

  const Point& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Point>& points() const noexcept { return points_; }

  /// Index of a point, matched coordinatewise within 1e-9.
  std::optional<std::size_t> find(std::span<const double> x) const;
  /// Like find(), throws domain_error when absent.
  std::size_t index_of(std::span<const double> x) const;

  bool operator==(const PointSet& o) const;

 private:
  std::vector<Point> points_;
  std::size_t dim_ = 0;
  bool spacetime_ = false;
};

using PointSetPtr = std::shared_ptr<const PointSet>;

inline PointSetPtr make_points(PointSet p) { return std::make_shared<const PointSet>(std::move(p)); }

/// Total function from a PointSet to the extended reals.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(PointSetPtr domain, std::vector<ExtReal> values);
  GridFunction(PointSetPtr domain, ExtReal fill);

  const PointSetPtr& domain() const noexcept { return domain_; }
  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<ExtReal>& values() const noexcept { return values_; }
  std::vector<ExtReal>& values() noexcept { return values_; }

  ExtReal operator[](std::size_t i) const { return values_[i]; }
  ExtReal& operator[](std::size_t i) { return values_[i]; }

  /// Pointwise min / max on a shared domain.
  friend GridFunction pointwise_min(const GridFunction& a, const GridFunction& b);
  friend GridFunction pointwise_max(const GridFunction& a, const GridFunction& b);

 private:
  PointSetPtr domain_;
  std::vector<ExtReal> values_;
};

bool same_domain(const PointSet& a, const PointSet& b);
bool same_domain(const GridFunction& f, const PointSet& d);
void require_same_domain(const GridFunction& f, const PointSet& d, const char* what);

/// f(x) + c with upper addition at every point.
GridFunction upper_shift(const GridFunction& f, ExtReal c);
/// f(x) + c with lower addition at every point.
GridFunction lower_shift(const GridFunction& f, ExtReal c);

bool approx_equal(const GridFunction& a, const GridFunction& b, double tol);
/// a <= b pointwise with slack tol.
bool approx_le(const GridFunction& a, const GridFunction& b, double tol);

enum class DiracKind { bottom, top };

/// bottom: 0 at x, -inf elsewhere. top: 0 at x, +inf elsewhere.
GridFunction dirac(const PointSetPtr& domain, std::span<const double> x, DiracKind kind);
GridFunction dirac_at(const PointSetPtr& domain, std::size_t index, DiracKind kind);

}  // namespace tropk
