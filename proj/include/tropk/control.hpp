#pragma once

/**
 * @file control.hpp
 * @brief Least-action (Maupertuis) kernels on spacetime lattices, value
 * functions, and inverse optimal control.
 *
 * Trajectories are lattice paths made of stencil moves. A move (k, j)
 * advances k time layers and j lattice steps in space along a straight
 * segment; its cost is the rectangle rule over the k layers it spans:
 *   sum_{i<k} dt * L(t + i dt, r + (i/k) j dr, j dr / (k dt)).
 * The action A(x0 -> x1) is the least total cost of a path with t0 < t1.
 * The kernel is b(x0, x1) = -A(earlier -> later), so it is symmetric.
 */

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "tropk/grid.hpp"
#include "tropk/kernels.hpp"
#include "tropk/lagrangian.hpp"
#include "tropk/matrix.hpp"
#include "tropk/representer.hpp"

namespace tropk {

struct TimeGrid {
  double t0 = 0.0;
  double T = 1.0;
  double dt = 0.1;

  std::size_t size() const;
  double at(std::size_t a) const { return t0 + static_cast<double>(a) * dt; }
};

/// Uniform lattice prod_k [lo_k, hi_k] with common step dr.
struct SpaceGrid {
  std::vector<double> lo;
  std::vector<double> hi;
  double dr = 0.1;

  std::size_t dim() const noexcept { return lo.size(); }
  std::vector<std::size_t> counts() const;
  std::size_t size() const;
  Point point(std::size_t s) const;
};

struct Move {
  std::size_t layers = 1;
  std::vector<int> displacement;
};

class MaupertuisProblem {
 public:
  /// Throws precondition_error on a bad grid or an empty stencil.
  MaupertuisProblem(TimeGrid time, SpaceGrid space, Lagrangian lagrangian, std::vector<Move> moves);

  /// Every (k, j) with 1 <= k <= max_layers and |j_i| <= max_displacement.
  /// Defaults: moves spanning up to 0.2 time units, any displacement that
  /// fits in the lattice.
  static std::vector<Move> default_stencil(const TimeGrid& time, const SpaceGrid& space,
                                           std::optional<std::size_t> max_layers = std::nullopt,
                                           std::optional<int> max_displacement = std::nullopt);

  const TimeGrid& time() const noexcept { return time_; }
  const SpaceGrid& space() const noexcept { return space_; }
  const Lagrangian& lagrangian() const noexcept { return lagrangian_; }
  const std::vector<Move>& moves() const noexcept { return moves_; }

  std::size_t n_times() const noexcept { return n_times_; }
  std::size_t n_space() const noexcept { return n_space_; }
  std::size_t n_nodes() const noexcept { return n_times_ * n_space_; }
  std::size_t node(std::size_t a, std::size_t s) const noexcept { return a * n_space_ + s; }

  /// Spacetime points (t, r...), node order: time-major.
  const PointSetPtr& spacetime_points() const noexcept { return spacetime_; }
  const PointSetPtr& space_points() const noexcept { return space_pts_; }

  /// The stencil contains -j together with each move (k, j).
  bool reversible() const;
  /// L >= 0 on every move of the stencil at every node.
  bool nonnegative_costs() const;

  /// Destination lattice index of a move from s, if inside the lattice.
  std::optional<std::size_t> shift(std::size_t s, const Move& mv) const;
  /// Cost of a move from node (a, s); +inf for forbidden velocities.
  double move_cost(std::size_t a, std::size_t s, std::size_t move_index) const;

 private:
  TimeGrid time_;
  SpaceGrid space_;
  Lagrangian lagrangian_;
  std::vector<Move> moves_;
  std::size_t n_times_ = 0;
  std::size_t n_space_ = 0;
  std::vector<std::size_t> counts_;
  PointSetPtr spacetime_;
  PointSetPtr space_pts_;
  /// Per-move cost when L is state-independent.
  std::vector<double> flat_cost_;
};

inline constexpr std::size_t kMaxGramEntries = 1'000'000;

struct MaupertuisGram {
  PointSetPtr points;
  ExtMatrix matrix;

  KernelRep kernel() const { return KernelRep::gram(points, matrix); }
};

/// All-pairs least action over stencil paths. Throws size_error when the
/// gram would exceed kMaxGramEntries.
MaupertuisGram maupertuis_dp(const MaupertuisProblem& problem);

/// Keeps entries with t1 >= t0 and sends the others to -inf. Throws
/// precondition_error on a positive entry.
ExtMatrix asymmetrize(const PointSet& spacetime, const ExtMatrix& gram);

/// r0, r1 -> b((t_a, r0), (t_c, r1)) on the space lattice.
ExtMatrix space_restriction(const MaupertuisProblem& problem, const ExtMatrix& gram, std::size_t a, std::size_t c);

/// V(T, .) = psi_T and V(t, r) = min over moves of cost + V(after move).
GridFunction value_function(const MaupertuisProblem& problem, const GridFunction& psi_T);

struct SubsolutionReport {
  bool holds = false;
  /// -V is a fixed point of double conjugation by the gram.
  bool in_range = false;
  /// Every sampled range element matching psi_T at T lies above -V.
  bool dominated = false;
  std::size_t samples = 0;
};

/// -V in Rg(B) and V̂ >= -V for random V̂ = B̄w with w(T, .) = psi_T.
SubsolutionReport largest_subsolution_check(const MaupertuisProblem& problem, const MaupertuisGram& gram,
                                            const GridFunction& psi_T, std::uint64_t seed, std::size_t n_samples = 20);

struct StoppingCostInverse {
  StoppingCost cost;
  /// -f0 on the spacetime grid.
  GridFunction value;
};

/// Samples (x_m, ys_m) of a value function -f with f in the range of the
/// asymmetric kernel; fits y* with p_m = x_m and regenerates the value.
StoppingCostInverse invert_stopping_cost(const MaupertuisGram& gram, const PointSet& xs,
                                         const std::vector<double>& ys, Loss loss = Loss::sup_norm);

struct TerminalCostInverse {
  bool feasible = false;
  std::optional<std::size_t> blocking_index;
  std::vector<Point> witnesses;
  /// min_m [δ⊤_{p_m} + b(r_m, p_m) - y_m] on the space lattice.
  GridFunction psi;
  /// Value function regenerated from psi.
  GridFunction value;
};

/// Samples ys_m = -V(t_a, r_m). The dual candidates are the whole space lattice.
TerminalCostInverse invert_terminal_cost(const MaupertuisProblem& problem, const MaupertuisGram& gram, std::size_t a,
                                         const PointSet& rs, const std::vector<double>& ys);

}  // namespace tropk
