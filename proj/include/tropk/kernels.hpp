#pragma once

/**
 * @file kernels.hpp
 * @brief Kernel representations, tropical positive semidefiniteness and
 * feature-map factorization.
 *
 * A kernel b maps X x X into R u {-inf}. It is tropically positive
 * semidefinite (tpsd) when it is symmetric and
 *   b(x,x) + b(y,y) >= b(x,y) + b(y,x)   for all x, y,
 * sums taken with -inf absorbing.
 */

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tropk/ext_real.hpp"
#include "tropk/grid.hpp"
#include "tropk/lagrangian.hpp"
#include "tropk/matrix.hpp"

namespace tropk {

inline constexpr double kPositivityTol = 1e-9;

enum class KernelFamily { conv, sconv, lip, dirac, power_distance, lax_hopf };

std::string to_string(KernelFamily f);
std::optional<KernelFamily> parse_kernel_family(const std::string& name);

/// Named kernel evaluated on demand.
///   conv           (x, y)_2
///   sconv          -scale * ||x - y||^2
///   lip            -scale * ||x - y||
///   dirac          0 on the diagonal, -inf elsewhere
///   power_distance -scale * ||x - y||^exponent
///   lax_hopf       closed-form least action of `lagrangian` between spacetime points
struct ClosedFormKernel {
  KernelFamily family = KernelFamily::conv;
  double exponent = 1.0;
  double scale = 1.0;
  Lagrangian lagrangian = Lagrangian::quadratic();
};

/// Dense kernel tabulated on a point set.
struct GramKernel {
  PointSetPtr points;
  ExtMatrix matrix;
};

class KernelRep {
 public:
  /// Validates squareness and that no entry is +inf.
  static KernelRep gram(PointSetPtr points, ExtMatrix matrix);
  static KernelRep closed_form(ClosedFormKernel spec);
  static KernelRep closed_form(KernelFamily family) { return closed_form(ClosedFormKernel{family}); }

  bool is_gram() const noexcept { return std::holds_alternative<GramKernel>(rep_); }
  const GramKernel& as_gram() const { return std::get<GramKernel>(rep_); }
  const ClosedFormKernel& as_closed_form() const { return std::get<ClosedFormKernel>(rep_); }

  ExtReal eval(std::span<const double> x, std::span<const double> y) const;

  /// [b(r_i, c_j)] for rows r and columns c.
  ExtMatrix matrix(const PointSet& rows, const PointSet& cols) const;
  ExtMatrix matrix(const PointSet& points) const { return matrix(points, points); }

 private:
  explicit KernelRep(std::variant<GramKernel, ClosedFormKernel> rep) : rep_(std::move(rep)) {}
  std::variant<GramKernel, ClosedFormKernel> rep_;
};

inline ExtReal eval(const KernelRep& k, std::span<const double> x, std::span<const double> y) { return k.eval(x, y); }

enum class TpsdFailure { none, symmetry, positivity };

struct TpsdReport {
  bool tpsd = true;
  TpsdFailure failure = TpsdFailure::none;
  /// Lowest-index violating pair (i, j), i <= j.
  std::optional<std::pair<std::size_t, std::size_t>> witness;
};

TpsdReport is_tpsd_pairwise(const ExtMatrix& gram, double tol = kPositivityTol);
TpsdReport is_tpsd_pairwise(const KernelRep& kernel, const PointSet& points, double tol = kPositivityTol);

struct PermutationReport {
  bool holds = true;
  /// Indices of the violating subset and, for each position k of the subset,
  /// the position sigma(k) it is sent to.
  std::vector<std::size_t> subset;
  std::vector<std::size_t> permutation;
};

inline constexpr std::size_t kMaxPermutationSize = 8;

/// sum_m b(x_m, x_m) >= sum_m b(x_m, x_sigma(m)) for every subset of at
/// most m_max points and every permutation sigma of it. Only cyclic
/// permutations are enumerated; every permutation is a product of cycles.
PermutationReport check_permutation_positivity(const ExtMatrix& gram, std::size_t m_max,
                                               double tol = kPositivityTol);
/// Same verdict by enumerating all permutations (slow reference).
PermutationReport check_permutation_positivity_full(const ExtMatrix& gram, std::size_t m_max,
                                                    double tol = kPositivityTol);

/// Full Monge check in the max-plus orientation, b_ij + b_mn >= b_in + b_mj
/// for i < m, j < n. On principal minors this is exactly tropical positivity.
/// Returns the first violating (i, m, j, n) if any.
std::optional<std::vector<std::size_t>> monge_violation(const ExtMatrix& gram, double tol = kPositivityTol);

struct PhiB0 {
  std::vector<ExtReal> phi;
  ExtMatrix b0;
};

/// b(x,y) = phi(x) + b0(x,y) + phi(y) with phi(x) = b(x,x)/2 and b0
/// symmetric, zero on the diagonal and nonpositive. Throws
/// precondition_error on non-tpsd input.
PhiB0 decompose_phi_b0(const ExtMatrix& gram);

/// psi(x, z) over an index set Z, recomposing b(x,y) = max_z psi(x,z) + psi(y,z).
struct FeatureMap {
  /// Z = X x X; z_pairs[z] = (u, v).
  std::vector<std::pair<std::size_t, std::size_t>> z_pairs;
  /// |X| x |Z|
  ExtMatrix psi;
};

FeatureMap factorize(const ExtMatrix& gram);
ExtMatrix recompose(const ExtMatrix& psi);
inline ExtMatrix recompose(const FeatureMap& fm) { return recompose(fm.psi); }

}  // namespace tropk
