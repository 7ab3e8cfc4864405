#include "tropk/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "tropk/conjugation.hpp"
#include "tropk/errors.hpp"

namespace tropk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGridTol = 1e-9;

std::size_t steps_between(double lo, double hi, double step, const char* what) {
  const double q = (hi - lo) / step;
  const double r = std::round(q);
  if (std::abs(q - r) > kGridTol * std::max(1.0, std::abs(q)))
    throw precondition_error(std::string(what) + ": extent is not a whole number of steps");
  return static_cast<std::size_t>(r);
}

}  // namespace

std::size_t TimeGrid::size() const {
  if (!(dt > 0.0) || !std::isfinite(t0) || !std::isfinite(T) || T < t0)
    throw precondition_error("time grid: need finite t0 <= T and dt > 0");
  return steps_between(t0, T, dt, "time grid") + 1;
}

std::vector<std::size_t> SpaceGrid::counts() const {
  if (!(dr > 0.0) || lo.empty() || lo.size() != hi.size())
    throw precondition_error("space grid: need dr > 0 and matching nonempty lo/hi");
  std::vector<std::size_t> c(lo.size());
  for (std::size_t k = 0; k < lo.size(); ++k) {
    if (!std::isfinite(lo[k]) || !std::isfinite(hi[k]) || hi[k] < lo[k])
      throw precondition_error("space grid: need finite lo <= hi");
    c[k] = steps_between(lo[k], hi[k], dr, "space grid") + 1;
  }
  return c;
}

std::size_t SpaceGrid::size() const {
  std::size_t n = 1;
  for (auto c : counts()) n *= c;
  return n;
}

Point SpaceGrid::point(std::size_t s) const {
  const auto c = counts();
  Point p(c.size());
  for (std::size_t k = c.size(); k-- > 0;) {
    p[k] = lo[k] + static_cast<double>(s % c[k]) * dr;
    s /= c[k];
  }
  return p;
}

MaupertuisProblem::MaupertuisProblem(TimeGrid time, SpaceGrid space, Lagrangian lagrangian, std::vector<Move> moves)
    : time_(time), space_(std::move(space)), lagrangian_(std::move(lagrangian)), moves_(std::move(moves)) {
  n_times_ = time_.size();
  counts_ = space_.counts();
  n_space_ = space_.size();
  if (moves_.empty()) throw precondition_error("maupertuis: empty stencil");
  for (const auto& mv : moves_) {
    if (mv.layers == 0) throw precondition_error("maupertuis: a move must advance at least one time layer");
    if (mv.displacement.size() != space_.dim())
      throw precondition_error("maupertuis: move displacement dimension differs from the space grid");
  }

  std::vector<Point> st, sp;
  st.reserve(n_nodes());
  sp.reserve(n_space_);
  for (std::size_t s = 0; s < n_space_; ++s) sp.push_back(space_.point(s));
  for (std::size_t a = 0; a < n_times_; ++a)
    for (std::size_t s = 0; s < n_space_; ++s) {
      Point x{time_.at(a)};
      x.insert(x.end(), sp[s].begin(), sp[s].end());
      st.push_back(std::move(x));
    }
  spacetime_ = make_points(PointSet(std::move(st), true));
  space_pts_ = make_points(PointSet(std::move(sp)));

  if (lagrangian_.state_independent()) {
    flat_cost_.reserve(moves_.size());
    for (const auto& mv : moves_) {
      const double k = static_cast<double>(mv.layers);
      std::vector<double> v(mv.displacement.size());
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = mv.displacement[i] * space_.dr / (k * time_.dt);
      flat_cost_.push_back(k * time_.dt * lagrangian_(v));
    }
  }
}

std::vector<Move> MaupertuisProblem::default_stencil(const TimeGrid& time, const SpaceGrid& space,
                                                     std::optional<std::size_t> max_layers,
                                                     std::optional<int> max_displacement) {
  const std::size_t nt = time.size();
  const auto counts = space.counts();
  std::size_t k_max = max_layers.value_or(
      std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(0.2 / time.dt))));
  k_max = std::max<std::size_t>(1, std::min(k_max, nt > 1 ? nt - 1 : 1));
  const int j_max = max_displacement.value_or(
      static_cast<int>(*std::max_element(counts.begin(), counts.end())) - 1);
  if (j_max < 0) throw precondition_error("default stencil: max displacement must be >= 0");

  std::vector<Move> moves;
  const std::size_t d = counts.size();
  const std::size_t side = 2 * static_cast<std::size_t>(j_max) + 1;
  std::size_t combos = 1;
  for (std::size_t k = 0; k < d; ++k) combos *= side;
  for (std::size_t k = 1; k <= k_max; ++k)
    for (std::size_t c = 0; c < combos; ++c) {
      Move mv{k, std::vector<int>(d)};
      std::size_t rest = c;
      for (std::size_t i = d; i-- > 0;) {
        mv.displacement[i] = static_cast<int>(rest % side) - j_max;
        rest /= side;
      }
      moves.push_back(std::move(mv));
    }
  return moves;
}

bool MaupertuisProblem::reversible() const {
  for (const auto& mv : moves_) {
    std::vector<int> neg(mv.displacement.size());
    std::transform(mv.displacement.begin(), mv.displacement.end(), neg.begin(), [](int j) { return -j; });
    if (std::none_of(moves_.begin(), moves_.end(),
                     [&](const Move& o) { return o.layers == mv.layers && o.displacement == neg; }))
      return false;
  }
  return true;
}

bool MaupertuisProblem::nonnegative_costs() const {
  if (!flat_cost_.empty())
    return std::all_of(flat_cost_.begin(), flat_cost_.end(), [](double c) { return c >= 0.0; });
  for (std::size_t a = 0; a < n_times_; ++a)
    for (std::size_t s = 0; s < n_space_; ++s)
      for (std::size_t m = 0; m < moves_.size(); ++m)
        if (move_cost(a, s, m) < 0.0) return false;
  return true;
}

std::optional<std::size_t> MaupertuisProblem::shift(std::size_t s, const Move& mv) const {
  std::size_t out = 0;
  std::size_t stride = 1;
  for (std::size_t k = counts_.size(); k-- > 0;) {
    const auto idx = static_cast<long long>(s % counts_[k]) + mv.displacement[k];
    s /= counts_[k];
    if (idx < 0 || idx >= static_cast<long long>(counts_[k])) return std::nullopt;
    out += static_cast<std::size_t>(idx) * stride;
    stride *= counts_[k];
  }
  return out;
}

double MaupertuisProblem::move_cost(std::size_t a, std::size_t s, std::size_t move_index) const {
  if (!flat_cost_.empty()) return flat_cost_[move_index];
  const Move& mv = moves_[move_index];
  const double k = static_cast<double>(mv.layers);
  const Point r0 = space_.point(s);
  std::vector<double> v(r0.size()), r(r0.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = mv.displacement[i] * space_.dr / (k * time_.dt);
  double acc = 0.0;
  for (std::size_t i = 0; i < mv.layers; ++i) {
    const double frac = static_cast<double>(i) / k;
    for (std::size_t q = 0; q < r.size(); ++q) r[q] = r0[q] + frac * mv.displacement[q] * space_.dr;
    acc += time_.dt * lagrangian_(time_.at(a + i), r, v);
  }
  return acc;
}

namespace {

// cost[node * n_moves + m] and destination node, +inf / n_nodes when absent.
struct MoveTable {
  std::vector<double> cost;
  std::vector<std::size_t> dest;
};

MoveTable tabulate_moves(const MaupertuisProblem& p) {
  const std::size_t nm = p.moves().size();
  MoveTable t{std::vector<double>(p.n_nodes() * nm, kInf), std::vector<std::size_t>(p.n_nodes() * nm, p.n_nodes())};
  for (std::size_t a = 0; a < p.n_times(); ++a)
    for (std::size_t s = 0; s < p.n_space(); ++s)
      for (std::size_t m = 0; m < nm; ++m) {
        const Move& mv = p.moves()[m];
        if (a + mv.layers >= p.n_times()) continue;
        const auto to = p.shift(s, mv);
        if (!to) continue;
        const double c = p.move_cost(a, s, m);
        if (std::isnan(c)) throw domain_error("maupertuis: Lagrangian returned NaN");
        if (c == kInf) continue;
        const std::size_t k = p.node(a, s) * nm + m;
        t.cost[k] = c;
        t.dest[k] = p.node(a + mv.layers, *to);
      }
  return t;
}

}  // namespace

MaupertuisGram maupertuis_dp(const MaupertuisProblem& problem) {
  const std::size_t n = problem.n_nodes();
  if (n > 0 && n > kMaxGramEntries / n)
    throw size_error("maupertuis_dp: " + std::to_string(n) + "^2 gram entries exceed the guard of " +
                     std::to_string(kMaxGramEntries));
  const MoveTable table = tabulate_moves(problem);
  const std::size_t nm = problem.moves().size();
  const std::size_t ns = problem.n_space();

  ExtMatrix b(n, n, ExtReal::neg_inf());
  std::vector<double> dist(n);
  for (std::size_t u = 0; u < n; ++u) {
    const std::size_t a0 = u / ns;
    std::fill(dist.begin() + static_cast<std::ptrdiff_t>(a0 * ns), dist.end(), kInf);
    dist[u] = 0.0;
    // Nodes are time-major and moves go forward, so index order is topological.
    for (std::size_t v = u; v < n; ++v) {
      const double dv = dist[v];
      if (dv == kInf) continue;
      for (std::size_t m = 0; m < nm; ++m) {
        const std::size_t k = v * nm + m;
        const std::size_t w = table.dest[k];
        if (w == n) continue;
        const double cand = dv + table.cost[k];
        if (cand < dist[w]) dist[w] = cand;
      }
    }
    b(u, u) = 0.0;
    for (std::size_t v = (a0 + 1) * ns; v < n; ++v)
      if (dist[v] < kInf) b(u, v) = b(v, u) = -dist[v];
  }
  return {problem.spacetime_points(), std::move(b)};
}

ExtMatrix asymmetrize(const PointSet& spacetime, const ExtMatrix& gram) {
  if (!spacetime.spacetime()) throw domain_error("asymmetrize: expected spacetime points");
  if (!gram.square() || gram.rows() != spacetime.size()) throw domain_error("asymmetrize: gram shape mismatch");
  ExtMatrix out = gram;
  for (std::size_t i = 0; i < gram.rows(); ++i)
    for (std::size_t j = 0; j < gram.cols(); ++j) {
      if (gram(i, j) > ExtReal(0.0)) throw precondition_error("asymmetrize: kernel entries must be <= 0");
      if (spacetime[j][0] < spacetime[i][0]) out(i, j) = ExtReal::neg_inf();
    }
  return out;
}

ExtMatrix space_restriction(const MaupertuisProblem& problem, const ExtMatrix& gram, std::size_t a, std::size_t c) {
  if (a >= problem.n_times() || c >= problem.n_times()) throw domain_error("space_restriction: time index out of range");
  if (gram.rows() != problem.n_nodes()) throw domain_error("space_restriction: gram does not match the problem");
  const std::size_t ns = problem.n_space();
  ExtMatrix out(ns, ns);
  for (std::size_t s = 0; s < ns; ++s)
    for (std::size_t q = 0; q < ns; ++q) out(s, q) = gram(problem.node(a, s), problem.node(c, q));
  return out;
}

GridFunction value_function(const MaupertuisProblem& problem, const GridFunction& psi_T) {
  require_same_domain(psi_T, *problem.space_points(), "value_function");
  const std::size_t ns = problem.n_space();
  const std::size_t nt = problem.n_times();
  const std::size_t nm = problem.moves().size();
  const MoveTable table = tabulate_moves(problem);
  std::vector<ExtReal> v(problem.n_nodes(), ExtReal::pos_inf());
  for (std::size_t s = 0; s < ns; ++s) v[problem.node(nt - 1, s)] = psi_T[s];
  for (std::size_t a = nt - 1; a-- > 0;)
    for (std::size_t s = 0; s < ns; ++s) {
      const std::size_t u = problem.node(a, s);
      ExtReal best = ExtReal::pos_inf();
      for (std::size_t m = 0; m < nm; ++m) {
        const std::size_t w = table.dest[u * nm + m];
        if (w == problem.n_nodes()) continue;
        best = min(best, upper_add(table.cost[u * nm + m], v[w]));
      }
      v[u] = best;
    }
  return GridFunction(problem.spacetime_points(), std::move(v));
}

SubsolutionReport largest_subsolution_check(const MaupertuisProblem& problem, const MaupertuisGram& gram,
                                            const GridFunction& psi_T, std::uint64_t seed, std::size_t n_samples) {
  const GridFunction v = value_function(problem, psi_T);
  std::vector<ExtReal> neg(v.size());
  std::transform(v.values().begin(), v.values().end(), neg.begin(), [](ExtReal x) { return negate(x); });
  const GridFunction minus_v(v.domain(), std::move(neg));

  const ConjugationOp op(gram.matrix, gram.points, gram.points);
  SubsolutionReport rep;
  rep.in_range = is_in_range(op, minus_v).in_range;
  rep.dominated = true;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> val(-3.0, 3.0);
  std::bernoulli_distribution top(0.2);
  const std::size_t ns = problem.n_space();
  const std::size_t last = problem.n_times() - 1;
  for (std::size_t k = 0; k < n_samples; ++k) {
    std::vector<ExtReal> w(v.size());
    for (std::size_t u = 0; u < w.size(); ++u)
      w[u] = u / ns == last ? psi_T[u % ns] : top(rng) ? ExtReal::pos_inf() : ExtReal(val(rng));
    const GridFunction vhat = conj_sesqui(op, GridFunction(gram.points, std::move(w)));
    if (!approx_le(minus_v, vhat, kIdentityTol)) rep.dominated = false;
  }
  rep.samples = n_samples;
  rep.holds = rep.in_range && rep.dominated;
  return rep;
}

StoppingCostInverse invert_stopping_cost(const MaupertuisGram& gram, const PointSet& xs, const std::vector<double>& ys,
                                         Loss loss) {
  const KernelRep kernel = KernelRep::gram(gram.points, asymmetrize(*gram.points, gram.matrix));
  StoppingCost cost = reconstruct_stopping_cost(xs, ys, kernel, gram.points, loss);
  GridFunction f0 = cost.f0.on(gram.points);
  for (auto& x : f0.values()) x = negate(x);
  return {std::move(cost), std::move(f0)};
}

TerminalCostInverse invert_terminal_cost(const MaupertuisProblem& problem, const MaupertuisGram& gram, std::size_t a,
                                         const PointSet& rs, const std::vector<double>& ys) {
  const PointSetPtr& space = problem.space_points();
  const KernelRep kernel = KernelRep::gram(space, space_restriction(problem, gram.matrix, a, problem.n_times() - 1));
  const SampleSet samples{make_points(rs), ys, space};
  const WitnessResult wit = feasible_witnesses(samples, kernel);

  TerminalCostInverse out;
  out.feasible = wit.feasible;
  out.blocking_index = wit.blocking_index;
  if (!wit.feasible) return out;
  out.witnesses = wit.witnesses;
  const ExtMatrix& k = kernel.as_gram().matrix;
  std::vector<ExtReal> psi(space->size(), ExtReal::pos_inf());
  for (std::size_t m = 0; m < rs.size(); ++m) {
    const std::size_t r = space->index_of(rs[m]);
    const std::size_t p = wit.witness_indices[m];
    psi[p] = min(psi[p], ExtReal(k(r, p).value() - ys[m]));
  }
  out.psi = GridFunction(space, std::move(psi));
  out.value = value_function(problem, out.psi);
  return out;
}

}  // namespace tropk
