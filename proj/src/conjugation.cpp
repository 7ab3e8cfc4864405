#include "tropk/conjugation.hpp"

#include "tropk/errors.hpp"

namespace tropk {

ConjugationOp::ConjugationOp(const KernelRep& kernel, PointSetPtr domain, PointSetPtr codomain)
    : ConjugationOp(kernel.matrix(*codomain, *domain), domain, codomain) {}

ConjugationOp::ConjugationOp(ExtMatrix matrix, PointSetPtr domain, PointSetPtr codomain)
    : matrix_(std::move(matrix)), domain_(std::move(domain)), codomain_(std::move(codomain)) {
  if (!domain_ || !codomain_) throw domain_error("ConjugationOp: null point set");
  if (matrix_.rows() != codomain_->size() || matrix_.cols() != domain_->size())
    throw domain_error("ConjugationOp: matrix shape does not match codomain x domain");
}

ConjugationOp ConjugationOp::adjoint() const { return ConjugationOp(matrix_.transpose(), codomain_, domain_); }

namespace {

template <class Combine>
GridFunction apply(const ConjugationOp& op, const GridFunction& f, const char* what, Combine combine) {
  require_same_domain(f, *op.domain(), what);
  const auto& b = op.matrix();
  std::vector<ExtReal> out(b.rows(), ExtReal::neg_inf());
  for (std::size_t x = 0; x < b.rows(); ++x)
    for (std::size_t y = 0; y < b.cols(); ++y) out[x] = max(out[x], combine(b(x, y), f[y]));
  return GridFunction(op.codomain(), std::move(out));
}

void require_symmetric(const ConjugationOp& op, const char* what) {
  if (!op.square() || !op.matrix().is_symmetric())
    throw precondition_error(std::string(what) + ": kernel must be square and symmetric");
}

}  // namespace

GridFunction conj_sesqui(const ConjugationOp& op, const GridFunction& f) {
  return apply(op, f, "conj_sesqui", [](ExtReal b, ExtReal v) { return lower_sub(b, v); });
}

GridFunction apply_linear(const ConjugationOp& op, const GridFunction& f) {
  return apply(op, f, "apply_linear", [](ExtReal b, ExtReal v) { return lower_add(b, v); });
}

ExtReal duality_product(const GridFunction& g_hat, const GridFunction& f) {
  require_same_domain(f, *g_hat.domain(), "duality_product");
  ExtReal acc = ExtReal::neg_inf();
  for (std::size_t x = 0; x < f.size(); ++x) acc = max(acc, lower_sub(f[x], g_hat[x]));
  return acc;
}

RangeMembership is_in_range(const ConjugationOp& op, const GridFunction& g, double tol) {
  require_symmetric(op, "is_in_range");
  RangeMembership r;
  r.biconjugate = conj_sesqui(op, conj_sesqui(op, g));
  std::vector<ExtReal> gap(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) gap[i] = upper_sub(g[i], r.biconjugate[i]);
  r.gap = GridFunction(g.domain(), std::move(gap));
  r.in_range = approx_equal(r.biconjugate, g, tol);
  return r;
}

ExtReal discrepancy_dB(const ConjugationOp& op, const GridFunction& f_hat, const GridFunction& g_hat) {
  require_symmetric(op, "discrepancy_dB");
  const GridFunction bf = conj_sesqui(op, f_hat);
  const GridFunction bg = conj_sesqui(op, g_hat);
  ExtReal acc = upper_add(duality_product(f_hat, bf), duality_product(g_hat, bg));
  acc = upper_sub(acc, duality_product(f_hat, bg));
  acc = upper_sub(acc, duality_product(g_hat, bf));
  return half(acc);
}

MonotoneCheck check_monotone(const ConjugationOp& op, const GridFunction& f_hat, const GridFunction& g_hat,
                             double tol) {
  require_symmetric(op, "check_monotone");
  const GridFunction bf = conj_sesqui(op, f_hat);
  const GridFunction bg = conj_sesqui(op, g_hat);
  const ExtReal ff = duality_product(f_hat, bf);
  const ExtReal gg = duality_product(g_hat, bg);
  const ExtReal fg = duality_product(f_hat, bg);
  const ExtReal gf = duality_product(g_hat, bf);
  return {approx_le(lower_add(fg, gf), upper_add(ff, gg), tol), approx_le(fg, max(ff, gg), tol)};
}

CyclicCheck check_cyclic_monotone(const ConjugationOp& op, const std::vector<GridFunction>& fs, double tol) {
  require_symmetric(op, "check_cyclic_monotone");
  if (fs.empty()) return {true, true};
  std::vector<GridFunction> bfs;
  bfs.reserve(fs.size());
  for (const auto& f : fs) bfs.push_back(conj_sesqui(op, f));
  ExtReal diag_sum = 0.0, cyc_sum = 0.0;
  ExtReal diag_max = ExtReal::neg_inf(), cyc_max = ExtReal::neg_inf();
  for (std::size_t m = 0; m < fs.size(); ++m) {
    const ExtReal d = duality_product(fs[m], bfs[m]);
    const ExtReal c = duality_product(fs[m], bfs[(m + 1) % fs.size()]);
    diag_sum = upper_add(diag_sum, d);
    cyc_sum = lower_add(cyc_sum, c);
    diag_max = max(diag_max, d);
    cyc_max = max(cyc_max, c);
  }
  return {approx_le(cyc_sum, diag_sum, tol), approx_le(cyc_max, diag_max, tol)};
}

GridFunction cauchy_schwarz_witness(const ConjugationOp& op, std::size_t x) {
  if (!op.square()) throw precondition_error("cauchy_schwarz_witness: operator must be square");
  return upper_shift(dirac_at(op.domain(), x, DiracKind::top), half(op.matrix()(x, x)));
}

ExtMatrix funk_kernel(const ConjugationOp& op) {
  const auto& b = op.matrix();
  const std::size_t n = b.cols();
  ExtMatrix c(n, n, ExtReal::neg_inf());
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < b.rows(); ++z) c(x, y) = max(c(x, y), lower_sub(b(z, x), b(z, y)));
  return c;
}

}  // namespace tropk
