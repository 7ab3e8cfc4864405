#pragma once

/**
 * @file representer.hpp
 * @brief Interpolation and regression over the range of a kernel.
 *
 * Data (x_m, y_m) is interpolated by some f in Rg(B) iff there are dual
 * points p_m in X' with
 *   y_n - y_m >= b(x_n, p_m) - b(x_m, p_m)   for all n, m,
 * and then the smallest such f is
 *   f0(x) = max_m b(x, p_m) - b(x_m, p_m) + y_m.
 */

#include <cstddef>
#include <optional>
#include <vector>

#include "tropk/grid.hpp"
#include "tropk/kernels.hpp"

namespace tropk {

inline constexpr double kConstraintTol = 1e-9;

struct SampleSet {
  PointSetPtr xs;
  std::vector<double> ys;
  PointSetPtr dual_candidates;

  /// Throws domain_error unless |xs| = |ys| >= 1, ys finite, X' nonempty.
  void validate() const;
  std::size_t size() const noexcept { return ys.size(); }
};

struct WitnessResult {
  bool feasible = false;
  /// Index into X' per sample; filled only when feasible.
  std::vector<std::size_t> witness_indices;
  std::vector<Point> witnesses;
  /// 0-based index of the first sample with no witness.
  std::optional<std::size_t> blocking_index;
};

/// Per-sample scan of X' for a valid dual point, lowest index first.
/// A candidate p also needs b(x_m, p) > -inf so that f0(x_m) = y_m.
WitnessResult feasible_witnesses(const SampleSet& samples, const KernelRep& kernel, double tol = kConstraintTol);

struct F0Term {
  Point p;
  /// y_m - b(x_m, p_m)
  double offset = 0.0;
};

/// f0(x) = max_m b(x, p_m) + offset_m, holding its own copy of the kernel.
class F0 {
 public:
  F0(KernelRep kernel, std::vector<F0Term> terms) : kernel_(std::move(kernel)), terms_(std::move(terms)) {}

  ExtReal eval(std::span<const double> x) const;
  GridFunction on(const PointSetPtr& grid) const;

  const std::vector<F0Term>& terms() const noexcept { return terms_; }
  const KernelRep& kernel() const noexcept { return kernel_; }

 private:
  KernelRep kernel_;
  std::vector<F0Term> terms_;
};

/// Builds f0 for values ys at xs with dual points ps. Throws
/// precondition_error if the ps violate the interpolation constraints.
F0 build_f0(const PointSet& xs, const std::vector<double>& ys, const std::vector<Point>& ps, const KernelRep& kernel,
            double tol = kConstraintTol);
inline F0 build_f0(const SampleSet& s, const std::vector<Point>& ps, const KernelRep& kernel,
                   double tol = kConstraintTol) {
  return build_f0(*s.xs, s.ys, ps, kernel, tol);
}

/// y_n - y_m >= bound.
struct DifferenceConstraint {
  std::size_t n = 0;
  std::size_t m = 0;
  ExtReal bound;
};

struct Box {
  std::optional<double> lo;
  std::optional<double> hi;
};

class DifferenceConstraintSystem {
 public:
  explicit DifferenceConstraintSystem(std::size_t n_vars) : n_vars_(n_vars), boxes_(n_vars) {}

  /// Throws precondition_error on a +inf bound; -inf bounds are dropped.
  void add(std::size_t n, std::size_t m, ExtReal bound);
  void set_box(std::size_t i, Box box);

  std::size_t n_vars() const noexcept { return n_vars_; }
  const std::vector<DifferenceConstraint>& constraints() const noexcept { return constraints_; }
  const std::vector<Box>& boxes() const noexcept { return boxes_; }

  /// Largest violation of any constraint or box by y (0 when feasible).
  double max_violation(const std::vector<double>& y) const;

 private:
  std::size_t n_vars_;
  std::vector<DifferenceConstraint> constraints_;
  std::vector<Box> boxes_;
};

struct DcsResult {
  bool feasible = false;
  std::vector<double> assignment;
  /// Node sequence of a negative cycle; node n_vars stands for the box source.
  std::vector<std::size_t> negative_cycle;
};

/// Bellman-Ford. When feasible, every variable bounded above through the
/// boxes takes its largest feasible value; the others sit at the smallest
/// shift of a feasible potential that respects all lower bounds.
DcsResult solve_difference_constraints(const DifferenceConstraintSystem& sys);

enum class Loss { sup_norm, l1 };

struct RegressOptions {
  Loss loss = Loss::sup_norm;
  /// Fixed dual points, one per sample. Empty selects search mode over X'.
  std::vector<Point> fixed_p;
  double tol = kConstraintTol;
};

struct RegressResult {
  std::vector<double> y_star;
  std::vector<Point> witnesses;
  double loss_value = 0.0;
  /// Search mode result: a local optimum over single dual-point swaps.
  bool heuristic = false;
  /// l1 optimum certified by the subset-direction test.
  bool certified = true;
};

/// Difference constraints y_n - y_m >= b(x_n,p_m) - b(x_m,p_m) for fixed p.
DifferenceConstraintSystem interpolation_constraints(const PointSet& xs, const std::vector<Point>& ps,
                                                     const KernelRep& kernel);

/// Minimizes the loss over (p, y) with f0 interpolating y. Throws
/// precondition_error when the fixed dual points admit no y at all.
RegressResult regress(const SampleSet& samples, const KernelRep& kernel, const RegressOptions& opts = {});

struct StoppingCost {
  /// -y*_m at x_m, +inf elsewhere on the grid.
  GridFunction w;
  std::vector<double> y_star;
  /// max_m b(x, x_m) + y*_m.
  F0 f0;
};

/// Requires an idempotent kernel on `grid` (precondition_error otherwise)
/// and samples located on the grid. Fits y* with p_m = x_m.
StoppingCost reconstruct_stopping_cost(const PointSet& xs, const std::vector<double>& ys, const KernelRep& kernel,
                                       const PointSetPtr& grid, Loss loss = Loss::sup_norm);

}  // namespace tropk
