#pragma once

/**
 * @file conjugation.hpp
 * @brief Sesquilinear and linear max-plus operators induced by a kernel.
 *
 *   conj_sesqui:  (B̄f)(x) = max_y b(x,y) - f(y)
 *   apply_linear: (B f)(x) = max_y b(x,y) + f(y)
 * Both use lower addition, so -inf is absorbing. The duality product pairs
 * a "min-side" function ĝ with a "max-side" function f:
 *   <ĝ, f> = max_x f(x) - ĝ(x).
 */

#include <optional>
#include <vector>

#include "tropk/grid.hpp"
#include "tropk/kernels.hpp"
#include "tropk/matrix.hpp"

namespace tropk {

inline constexpr double kIdentityTol = 1e-9;

/// Kernel b tabulated on codomain x domain; rows index the output point.
class ConjugationOp {
 public:
  ConjugationOp(const KernelRep& kernel, PointSetPtr domain, PointSetPtr codomain);
  /// Square operator on one grid.
  ConjugationOp(const KernelRep& kernel, PointSetPtr points) : ConjugationOp(kernel, points, points) {}
  ConjugationOp(ExtMatrix matrix, PointSetPtr domain, PointSetPtr codomain);

  const ExtMatrix& matrix() const noexcept { return matrix_; }
  const PointSetPtr& domain() const noexcept { return domain_; }
  const PointSetPtr& codomain() const noexcept { return codomain_; }
  bool square() const noexcept { return same_domain(*domain_, *codomain_); }

  /// Operator of the transposed kernel b'(y,x) = b(x,y).
  ConjugationOp adjoint() const;

 private:
  ExtMatrix matrix_;
  PointSetPtr domain_;
  PointSetPtr codomain_;
};

GridFunction conj_sesqui(const ConjugationOp& op, const GridFunction& f);
GridFunction apply_linear(const ConjugationOp& op, const GridFunction& f);
ExtReal duality_product(const GridFunction& g_hat, const GridFunction& f);

struct RangeMembership {
  bool in_range = false;
  GridFunction biconjugate;
  /// g - B̄B̄g (upper subtraction); nonnegative, zero iff in range.
  GridFunction gap;
};

/// g in Rg(B) iff B̄B̄g = g. Requires a square symmetric kernel.
RangeMembership is_in_range(const ConjugationOp& op, const GridFunction& g, double tol = kIdentityTol);

/// d_B(f̂, ĝ) = ½[<f̂,B̄f̂> + <ĝ,B̄ĝ> - <f̂,B̄ĝ> - <ĝ,B̄f̂>] with upper operations.
ExtReal discrepancy_dB(const ConjugationOp& op, const GridFunction& f_hat, const GridFunction& g_hat);

struct MonotoneCheck {
  /// <f̂,B̄f̂> +upper <ĝ,B̄ĝ>  >=  <f̂,B̄ĝ> +lower <ĝ,B̄f̂>
  bool holds_pair = false;
  /// max(<f̂,B̄f̂>, <ĝ,B̄ĝ>)  >=  <f̂,B̄ĝ>
  bool holds_max = false;
};

MonotoneCheck check_monotone(const ConjugationOp& op, const GridFunction& f_hat, const GridFunction& g_hat,
                             double tol = kIdentityTol);

struct CyclicCheck {
  /// sum_m <f̂_m, B̄f̂_m>  >=  sum_m <f̂_m, B̄f̂_{m+1}>
  bool holds_sum = false;
  /// max_m <f̂_m, B̄f̂_m>  >=  max_m <f̂_m, B̄f̂_{m+1}>
  bool holds_max = false;
};

/// Cyclic forms over f̂_1..f̂_M with f̂_{M+1} = f̂_1.
CyclicCheck check_cyclic_monotone(const ConjugationOp& op, const std::vector<GridFunction>& fs,
                                  double tol = kIdentityTol);

/// δ⊤_x + b(x,x)/2. The pair built at a violating (x, y) breaks holds_max
/// whenever b is symmetric but not tpsd; <f̂, B̄f̂> = 0 for it.
GridFunction cauchy_schwarz_witness(const ConjugationOp& op, std::size_t x);

/// c(x,y) = max_z b(z,x) - b(z,y), with -inf absorbing.
ExtMatrix funk_kernel(const ConjugationOp& op);

}  // namespace tropk
