#pragma once

#include <optional>
#include <vector>

#include "tropk/grid.hpp"
#include "tropk/matrix.hpp"

namespace tropk {

/// Finite family of proper functions on a shared domain.
class FunctionFamily {
 public:
  /// Throws precondition_error on an empty family or an identically +inf
  /// member, domain_error on mixed domains or -inf values.
  explicit FunctionFamily(std::vector<GridFunction> members);

  const PointSetPtr& domain() const noexcept { return members_.front().domain(); }
  const std::vector<GridFunction>& members() const noexcept { return members_; }

 private:
  std::vector<GridFunction> members_;
};

/// c_G(x,y) = min_g g(x) - g(y), upper subtraction.
ExtMatrix max_kernel_cG(const FunctionFamily& family);

/// (C_G f)(x) = max_y c_G(x,y) + f(y), lower addition.
GridFunction closure_CG(const ExtMatrix& cG, const GridFunction& f);

/// f(x) <= f(y) - c_G(y,x) for all x, y (upper subtraction).
bool is_lipschitz_member(const ExtMatrix& cG, const GridFunction& f, double tol = 0.0);

/// Max-plus square equals the matrix.
bool is_idempotent(const ExtMatrix& m, double tol = 1e-9);

struct RegularityResult {
  bool regular = false;
  /// Greatest A with B A B <= B; certifies regularity when B A B = B.
  ExtMatrix witness;
};

RegularityResult is_von_neumann_regular(const ExtMatrix& b, double tol = 1e-9);

}  // namespace tropk
