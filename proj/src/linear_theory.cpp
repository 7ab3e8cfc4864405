#include "tropk/linear_theory.hpp"

#include <algorithm>

#include "tropk/errors.hpp"

namespace tropk {

FunctionFamily::FunctionFamily(std::vector<GridFunction> members) : members_(std::move(members)) {
  if (members_.empty()) throw precondition_error("FunctionFamily: empty family");
  const auto& d = *members_.front().domain();
  for (const auto& g : members_) {
    require_same_domain(g, d, "FunctionFamily");
    if (std::all_of(g.values().begin(), g.values().end(), [](ExtReal v) { return v.is_pos_inf(); }))
      throw precondition_error("FunctionFamily: member identically +inf is not proper");
    if (std::any_of(g.values().begin(), g.values().end(), [](ExtReal v) { return v.is_neg_inf(); }))
      throw domain_error("FunctionFamily: members take values in (-inf, +inf]");
  }
}

ExtMatrix max_kernel_cG(const FunctionFamily& family) {
  const std::size_t n = family.domain()->size();
  ExtMatrix c(n, n, ExtReal::pos_inf());
  for (const auto& g : family.members())
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) c(x, y) = min(c(x, y), upper_sub(g[x], g[y]));
  return c;
}

GridFunction closure_CG(const ExtMatrix& cG, const GridFunction& f) {
  if (!cG.square() || cG.cols() != f.size()) throw domain_error("closure_CG: c_G does not match the domain");
  std::vector<ExtReal> out(f.size(), ExtReal::neg_inf());
  for (std::size_t x = 0; x < f.size(); ++x)
    for (std::size_t y = 0; y < f.size(); ++y) out[x] = max(out[x], lower_add(cG(x, y), f[y]));
  return GridFunction(f.domain(), std::move(out));
}

bool is_lipschitz_member(const ExtMatrix& cG, const GridFunction& f, double tol) {
  if (!cG.square() || cG.cols() != f.size()) throw domain_error("is_lipschitz_member: c_G does not match the domain");
  for (std::size_t x = 0; x < f.size(); ++x)
    for (std::size_t y = 0; y < f.size(); ++y)
      if (!approx_le(f[x], upper_sub(f[y], cG(y, x)), tol)) return false;
  return true;
}

bool is_idempotent(const ExtMatrix& m, double tol) {
  if (!m.square()) throw domain_error("is_idempotent: matrix must be square");
  return approx_equal(maxplus_product(m, m), m, tol);
}

RegularityResult is_von_neumann_regular(const ExtMatrix& b, double tol) {
  if (!b.square()) throw domain_error("is_von_neumann_regular: matrix must be square");
  RegularityResult r;
  r.witness = right_residual(left_residual(b, b), b);
  r.regular = approx_equal(maxplus_product(maxplus_product(b, r.witness), b), b, tol);
  return r;
}

}  // namespace tropk
