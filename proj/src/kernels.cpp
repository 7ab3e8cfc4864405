#include "tropk/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "tropk/errors.hpp"

namespace tropk {

std::string to_string(KernelFamily f) {
  switch (f) {
    case KernelFamily::conv: return "conv";
    case KernelFamily::sconv: return "sconv";
    case KernelFamily::lip: return "lip";
    case KernelFamily::dirac: return "dirac";
    case KernelFamily::power_distance: return "power_distance";
    case KernelFamily::lax_hopf: return "lax_hopf";
  }
  return "?";
}

std::optional<KernelFamily> parse_kernel_family(const std::string& name) {
  for (auto f : {KernelFamily::conv, KernelFamily::sconv, KernelFamily::lip, KernelFamily::dirac,
                 KernelFamily::power_distance, KernelFamily::lax_hopf})
    if (to_string(f) == name) return f;
  return std::nullopt;
}

KernelRep KernelRep::gram(PointSetPtr points, ExtMatrix matrix) {
  if (!points) throw domain_error("gram kernel: null point set");
  if (!matrix.square() || matrix.rows() != points->size())
    throw domain_error("gram kernel: matrix must be square and match the point count");
  for (auto v : matrix.data())
    if (v.is_pos_inf()) throw precondition_error("gram kernel: entries must be < +inf");
  return KernelRep(GramKernel{std::move(points), std::move(matrix)});
}

KernelRep KernelRep::closed_form(ClosedFormKernel spec) {
  if (spec.family == KernelFamily::power_distance && !(spec.exponent > 0.0))
    throw precondition_error("power_distance kernel: exponent must be > 0");
  if (!(spec.scale >= 0.0)) throw precondition_error("closed-form kernel: scale must be >= 0");
  return KernelRep(std::move(spec));
}

namespace {

double sq_dist(std::span<const double> x, std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) acc += (x[k] - y[k]) * (x[k] - y[k]);
  return acc;
}

}  // namespace

ExtReal KernelRep::eval(std::span<const double> x, std::span<const double> y) const {
  if (const auto* g = std::get_if<GramKernel>(&rep_))
    return g->matrix(g->points->index_of(x), g->points->index_of(y));

  const auto& c = std::get<ClosedFormKernel>(rep_);
  if (x.size() != y.size()) throw domain_error("kernel eval: points of different dimensions");
  switch (c.family) {
    case KernelFamily::conv:
      return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
    case KernelFamily::sconv:
      return -c.scale * sq_dist(x, y);
    case KernelFamily::lip:
      return -c.scale * std::sqrt(sq_dist(x, y));
    case KernelFamily::dirac:
      return sq_dist(x, y) == 0.0 ? ExtReal(0.0) : ExtReal::neg_inf();
    case KernelFamily::power_distance:
      return -c.scale * std::pow(std::sqrt(sq_dist(x, y)), c.exponent);
    case KernelFamily::lax_hopf:
      return lax_hopf(c.lagrangian, x, y);
  }
  throw domain_error("kernel eval: unknown family");
}

ExtMatrix KernelRep::matrix(const PointSet& rows, const PointSet& cols) const {
  ExtMatrix m(rows.size(), cols.size());
  if (const auto* g = std::get_if<GramKernel>(&rep_)) {
    std::vector<std::size_t> ri(rows.size()), ci(cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i) ri[i] = g->points->index_of(rows[i]);
    for (std::size_t j = 0; j < cols.size(); ++j) ci[j] = g->points->index_of(cols[j]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) m(i, j) = g->matrix(ri[i], ci[j]);
    return m;
  }
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) m(i, j) = eval(rows[i], cols[j]);
  return m;
}

TpsdReport is_tpsd_pairwise(const ExtMatrix& gram, double tol) {
  if (!gram.square()) throw domain_error("is_tpsd_pairwise: gram must be square");
  const std::size_t n = gram.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      if (!approx_equal(gram(i, j), gram(j, i), tol))
        return {false, TpsdFailure::symmetry, std::pair{i, j}};
      const ExtReal diag = lower_add(gram(i, i), gram(j, j));
      const ExtReal cross = lower_add(gram(i, j), gram(j, i));
      if (!approx_le(cross, diag, tol)) return {false, TpsdFailure::positivity, std::pair{i, j}};
    }
  return {};
}

TpsdReport is_tpsd_pairwise(const KernelRep& kernel, const PointSet& points, double tol) {
  return is_tpsd_pairwise(kernel.matrix(points), tol);
}

namespace {

void check_size(const ExtMatrix& gram, std::size_t m_max) {
  if (!gram.square()) throw domain_error("permutation check: gram must be square");
  if (m_max > kMaxPermutationSize)
    throw size_error("permutation check: m_max > " + std::to_string(kMaxPermutationSize) +
                     " is refused (combinatorial explosion)");
}

// Calls visit(subset) for every subset of {0..n-1} of size 1..m_max, in
// lexicographic order of increasing size. Stops when visit returns false.
template <class Visit>
bool for_each_subset(std::size_t n, std::size_t m_max, Visit&& visit) {
  std::vector<std::size_t> idx;
  for (std::size_t k = 1; k <= std::min(n, m_max); ++k) {
    idx.resize(k);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    while (true) {
      if (!visit(idx)) return false;
      std::size_t pos = k;
      while (pos > 0 && idx[pos - 1] == n - k + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t q = pos; q < k; ++q) idx[q] = idx[q - 1] + 1;
    }
  }
  return true;
}

ExtReal diagonal_sum(const ExtMatrix& g, const std::vector<std::size_t>& s) {
  ExtReal acc = 0.0;
  for (auto i : s) acc = lower_add(acc, g(i, i));
  return acc;
}

}  // namespace

PermutationReport check_permutation_positivity(const ExtMatrix& gram, std::size_t m_max, double tol) {
  check_size(gram, m_max);
  PermutationReport report;
  for_each_subset(gram.rows(), m_max, [&](const std::vector<std::size_t>& s) {
    const std::size_t k = s.size();
    if (k < 2) return true;
    const ExtReal diag = diagonal_sum(gram, s);
    // Cycles through s[0]: order the remaining positions.
    std::vector<std::size_t> order(k - 1);
    std::iota(order.begin(), order.end(), std::size_t{1});
    do {
      ExtReal cyc = gram(s[0], s[order[0]]);
      for (std::size_t q = 0; q + 1 < order.size(); ++q) cyc = lower_add(cyc, gram(s[order[q]], s[order[q + 1]]));
      cyc = lower_add(cyc, gram(s[order.back()], s[0]));
      if (!approx_le(cyc, diag, tol)) {
        report.holds = false;
        report.subset = s;
        report.permutation.assign(k, 0);
        report.permutation[0] = order[0];
        for (std::size_t q = 0; q + 1 < order.size(); ++q) report.permutation[order[q]] = order[q + 1];
        report.permutation[order.back()] = 0;
        return false;
      }
    } while (std::next_permutation(order.begin(), order.end()));
    return true;
  });
  return report;
}

PermutationReport check_permutation_positivity_full(const ExtMatrix& gram, std::size_t m_max, double tol) {
  check_size(gram, m_max);
  PermutationReport report;
  for_each_subset(gram.rows(), m_max, [&](const std::vector<std::size_t>& s) {
    const std::size_t k = s.size();
    const ExtReal diag = diagonal_sum(gram, s);
    std::vector<std::size_t> sigma(k);
    std::iota(sigma.begin(), sigma.end(), std::size_t{0});
    do {
      ExtReal acc = 0.0;
      for (std::size_t q = 0; q < k; ++q) acc = lower_add(acc, gram(s[q], s[sigma[q]]));
      if (!approx_le(acc, diag, tol)) {
        report = {false, s, sigma};
        return false;
      }
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return true;
  });
  return report;
}

std::optional<std::vector<std::size_t>> monge_violation(const ExtMatrix& g, double tol) {
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t m = i + 1; m < g.rows(); ++m)
      for (std::size_t j = 0; j < g.cols(); ++j)
        for (std::size_t n = j + 1; n < g.cols(); ++n)
          if (!approx_le(lower_add(g(i, n), g(m, j)), lower_add(g(i, j), g(m, n)), tol))
            return std::vector<std::size_t>{i, m, j, n};
  return std::nullopt;
}

namespace {

void require_tpsd(const ExtMatrix& gram, const char* what) {
  const auto r = is_tpsd_pairwise(gram);
  if (!r.tpsd) {
    std::ostringstream os;
    os << what << ": kernel is not tpsd ("
       << (r.failure == TpsdFailure::symmetry ? "symmetry" : "positivity") << " fails at pair ("
       << r.witness->first << ", " << r.witness->second << "))";
    throw precondition_error(os.str());
  }
}

}  // namespace

PhiB0 decompose_phi_b0(const ExtMatrix& gram) {
  require_tpsd(gram, "decompose_phi_b0");
  const std::size_t n = gram.rows();
  PhiB0 out{std::vector<ExtReal>(n), ExtMatrix(n, n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) out.phi[i] = half(gram(i, i));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (out.phi[i].is_finite() && out.phi[j].is_finite())
        out.b0(i, j) = gram(i, j).is_neg_inf()
                           ? ExtReal::neg_inf()
                           : ExtReal(gram(i, j).value() - out.phi[i].value() - out.phi[j].value());
  return out;
}

FeatureMap factorize(const ExtMatrix& gram) {
  require_tpsd(gram, "factorize");
  const std::size_t n = gram.rows();
  FeatureMap fm;
  fm.z_pairs.reserve(n * n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) fm.z_pairs.emplace_back(u, v);
  fm.psi = ExtMatrix(n, n * n, ExtReal::neg_inf());
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      // psi(x, (x, y)) = b(x,x)/2 ; psi(x, (y, x)) = b(x,y) - b(y,y)/2 (lower).
      fm.psi(x, x * n + y) = half(gram(x, x));
      if (y != x) fm.psi(x, y * n + x) = lower_sub(gram(x, y), half(gram(y, y)));
    }
  return fm;
}

ExtMatrix recompose(const ExtMatrix& psi) {
  return maxplus_product(psi, psi.transpose());
}

}  // namespace tropk
