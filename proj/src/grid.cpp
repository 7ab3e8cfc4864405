#include "tropk/grid.hpp"

#include <cmath>
#include <sstream>

#include "tropk/errors.hpp"

namespace tropk {

namespace {

constexpr double kPointTol = 1e-9;

bool same_point(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (std::abs(a[k] - b[k]) > kPointTol) return false;
  return true;
}

std::string describe(std::span<const double> x) {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < x.size(); ++k) os << (k ? ", " : "") << x[k];
  os << ')';
  return os.str();
}

}  // namespace

PointSet::PointSet(std::vector<Point> points, bool spacetime)
    : points_(std::move(points)), spacetime_(spacetime) {
  if (points_.empty()) return;
  dim_ = points_.front().size();
  if (dim_ == 0) throw domain_error("PointSet: points must have dimension >= 1");
  if (spacetime_ && dim_ < 2) throw domain_error("PointSet: spacetime points need a time and a space coordinate");
  for (const auto& p : points_) {
    if (p.size() != dim_) throw domain_error("PointSet: mixed point dimensions");
    for (double c : p)
      if (!std::isfinite(c)) throw domain_error("PointSet: coordinates must be finite");
  }
  // Quadratic scan; point sets here are desk-sized.
  for (std::size_t i = 0; i < points_.size(); ++i)
    for (std::size_t j = i + 1; j < points_.size(); ++j)
      if (same_point(points_[i], points_[j]))
        throw domain_error("PointSet: duplicate point " + describe(points_[i]));
}

PointSet PointSet::uniform_1d(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw domain_error("PointSet::uniform_1d: need step > 0 and lo <= hi");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<Point> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pts.push_back({lo + static_cast<double>(i) * step});
  return PointSet(std::move(pts));
}

PointSet PointSet::from_scalars(std::span<const double> xs) {
  std::vector<Point> pts;
  pts.reserve(xs.size());
  for (double x : xs) pts.push_back({x});
  return PointSet(std::move(pts));
}

std::optional<std::size_t> PointSet::find(std::span<const double> x) const {
  for (std::size_t i = 0; i < points_.size(); ++i)
    if (same_point(points_[i], x)) return i;
  return std::nullopt;
}

std::size_t PointSet::index_of(std::span<const double> x) const {
  if (auto i = find(x)) return *i;
  throw domain_error("point " + describe(x) + " is not in the domain");
}

bool PointSet::operator==(const PointSet& o) const {
  if (points_.size() != o.points_.size() || spacetime_ != o.spacetime_) return false;
  for (std::size_t i = 0; i < points_.size(); ++i)
    if (!same_point(points_[i], o.points_[i])) return false;
  return true;
}

GridFunction::GridFunction(PointSetPtr domain, std::vector<ExtReal> values)
    : domain_(std::move(domain)), values_(std::move(values)) {
  if (!domain_) throw domain_error("GridFunction: null domain");
  if (values_.size() != domain_->size()) throw domain_error("GridFunction: one value per domain point required");
}

GridFunction::GridFunction(PointSetPtr domain, ExtReal fill)
    : domain_(std::move(domain)) {
  if (!domain_) throw domain_error("GridFunction: null domain");
  values_.assign(domain_->size(), fill);
}

bool same_domain(const PointSet& a, const PointSet& b) { return &a == &b || a == b; }

bool same_domain(const GridFunction& f, const PointSet& d) {
  return f.domain() && same_domain(*f.domain(), d);
}

void require_same_domain(const GridFunction& f, const PointSet& d, const char* what) {
  if (!same_domain(f, d)) throw domain_error(std::string(what) + ": function is not defined on the operator domain");
}

GridFunction pointwise_min(const GridFunction& a, const GridFunction& b) {
  require_same_domain(b, *a.domain(), "pointwise_min");
  GridFunction out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = min(a[i], b[i]);
  return out;
}

GridFunction pointwise_max(const GridFunction& a, const GridFunction& b) {
  require_same_domain(b, *a.domain(), "pointwise_max");
  GridFunction out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = max(a[i], b[i]);
  return out;
}

GridFunction upper_shift(const GridFunction& f, ExtReal c) {
  GridFunction out = f;
  for (auto& v : out.values()) v = upper_add(v, c);
  return out;
}

GridFunction lower_shift(const GridFunction& f, ExtReal c) {
  GridFunction out = f;
  for (auto& v : out.values()) v = lower_add(v, c);
  return out;
}

bool approx_equal(const GridFunction& a, const GridFunction& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!approx_equal(a[i], b[i], tol)) return false;
  return true;
}

bool approx_le(const GridFunction& a, const GridFunction& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!approx_le(a[i], b[i], tol)) return false;
  return true;
}

GridFunction dirac_at(const PointSetPtr& domain, std::size_t index, DiracKind kind) {
  if (!domain || index >= domain->size()) throw domain_error("dirac: index outside the domain");
  GridFunction f(domain, kind == DiracKind::bottom ? ExtReal::neg_inf() : ExtReal::pos_inf());
  f[index] = 0.0;
  return f;
}

GridFunction dirac(const PointSetPtr& domain, std::span<const double> x, DiracKind kind) {
  if (!domain) throw domain_error("dirac: null domain");
  return dirac_at(domain, domain->index_of(x), kind);
}

}  // namespace tropk
