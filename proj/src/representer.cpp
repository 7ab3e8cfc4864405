#include "tropk/representer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tropk/errors.hpp"
#include "tropk/linear_theory.hpp"

namespace tropk {

void SampleSet::validate() const {
  if (!xs || !dual_candidates) throw domain_error("samples: missing point set");
  if (ys.empty() || xs->size() != ys.size()) throw domain_error("samples: need |xs| = |ys| >= 1");
  for (double y : ys)
    if (!std::isfinite(y)) throw domain_error("samples: targets must be finite");
  if (dual_candidates->empty()) throw domain_error("samples: dual candidate set is empty");
}

namespace {

bool witness_ok(const ExtMatrix& bx, std::size_t m, std::size_t p, const std::vector<double>& ys, double tol) {
  const ExtReal bmp = bx(m, p);
  if (bmp.is_neg_inf()) return false;
  for (std::size_t n = 0; n < ys.size(); ++n)
    if (!approx_le(lower_sub(bx(n, p), bmp), ys[n] - ys[m], tol)) return false;
  return true;
}

}  // namespace

WitnessResult feasible_witnesses(const SampleSet& samples, const KernelRep& kernel, double tol) {
  samples.validate();
  const ExtMatrix bx = kernel.matrix(*samples.xs, *samples.dual_candidates);
  WitnessResult r;
  for (std::size_t m = 0; m < samples.size(); ++m) {
    std::optional<std::size_t> found;
    for (std::size_t p = 0; p < samples.dual_candidates->size() && !found; ++p)
      if (witness_ok(bx, m, p, samples.ys, tol)) found = p;
    if (!found) {
      r.blocking_index = m;
      r.witness_indices.clear();
      r.witnesses.clear();
      return r;
    }
    r.witness_indices.push_back(*found);
    r.witnesses.push_back((*samples.dual_candidates)[*found]);
  }
  r.feasible = true;
  return r;
}

ExtReal F0::eval(std::span<const double> x) const {
  ExtReal acc = ExtReal::neg_inf();
  for (const auto& t : terms_) acc = max(acc, lower_add(kernel_.eval(x, t.p), t.offset));
  return acc;
}

GridFunction F0::on(const PointSetPtr& grid) const {
  // Terms may share a dual point; tabulate each distinct point once.
  std::vector<Point> ps;
  std::vector<std::size_t> col(terms_.size());
  for (std::size_t m = 0; m < terms_.size(); ++m) {
    const auto it = std::find(ps.begin(), ps.end(), terms_[m].p);
    col[m] = static_cast<std::size_t>(it - ps.begin());
    if (it == ps.end()) ps.push_back(terms_[m].p);
  }
  const ExtMatrix b = kernel_.matrix(*grid, PointSet(std::move(ps)));
  std::vector<ExtReal> out(grid->size(), ExtReal::neg_inf());
  for (std::size_t i = 0; i < grid->size(); ++i)
    for (std::size_t m = 0; m < terms_.size(); ++m) out[i] = max(out[i], lower_add(b(i, col[m]), terms_[m].offset));
  return GridFunction(grid, std::move(out));
}

F0 build_f0(const PointSet& xs, const std::vector<double>& ys, const std::vector<Point>& ps, const KernelRep& kernel,
            double tol) {
  if (xs.size() != ys.size() || ps.size() != ys.size() || ys.empty())
    throw precondition_error("build_f0: need one value and one dual point per sample");
  std::vector<F0Term> terms;
  terms.reserve(ps.size());
  for (std::size_t m = 0; m < ps.size(); ++m) {
    const ExtReal bmp = kernel.eval(xs[m], ps[m]);
    if (!bmp.is_finite()) throw precondition_error("build_f0: b(x_m, p_m) must be finite");
    for (std::size_t n = 0; n < xs.size(); ++n)
      if (!approx_le(lower_sub(kernel.eval(xs[n], ps[m]), bmp), ys[n] - ys[m], tol))
        throw precondition_error("build_f0: dual point " + std::to_string(m) + " violates constraint " +
                                 std::to_string(n));
    terms.push_back({ps[m], ys[m] - bmp.value()});
  }
  return F0(kernel, std::move(terms));
}

void DifferenceConstraintSystem::add(std::size_t n, std::size_t m, ExtReal bound) {
  if (n >= n_vars_ || m >= n_vars_) throw domain_error("difference constraint: index out of range");
  if (bound.is_pos_inf()) throw precondition_error("difference constraint: +inf bound is infeasible");
  if (bound.is_neg_inf()) return;
  constraints_.push_back({n, m, bound});
}

void DifferenceConstraintSystem::set_box(std::size_t i, Box box) {
  if (i >= n_vars_) throw domain_error("difference constraint: box index out of range");
  if (box.lo && !std::isfinite(*box.lo)) throw domain_error("difference constraint: box bounds must be finite");
  if (box.hi && !std::isfinite(*box.hi)) throw domain_error("difference constraint: box bounds must be finite");
  boxes_[i] = box;
}

double DifferenceConstraintSystem::max_violation(const std::vector<double>& y) const {
  double v = 0.0;
  for (const auto& c : constraints_) v = std::max(v, c.bound.value() - (y[c.n] - y[c.m]));
  for (std::size_t i = 0; i < n_vars_; ++i) {
    if (boxes_[i].lo) v = std::max(v, *boxes_[i].lo - y[i]);
    if (boxes_[i].hi) v = std::max(v, y[i] - *boxes_[i].hi);
  }
  return v;
}

namespace {

struct Edge {
  std::size_t from, to;
  double w;
};

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRelaxEps = 1e-12;

// dist[to] <= dist[from] + w encodes value(to) <= value(from) + w.
std::vector<Edge> build_edges(const DifferenceConstraintSystem& sys) {
  std::vector<Edge> edges;
  const std::size_t s = sys.n_vars();
  for (const auto& c : sys.constraints()) edges.push_back({c.n, c.m, -c.bound.value()});
  for (std::size_t i = 0; i < s; ++i) {
    if (sys.boxes()[i].hi) edges.push_back({s, i, *sys.boxes()[i].hi});
    if (sys.boxes()[i].lo) edges.push_back({i, s, -*sys.boxes()[i].lo});
  }
  return edges;
}

struct BellmanFord {
  std::vector<double> dist;
  std::vector<std::size_t> pred;
  std::optional<std::size_t> relaxed_last;
};

BellmanFord bellman_ford(std::size_t n_nodes, const std::vector<Edge>& edges, std::vector<double> dist) {
  BellmanFord r{std::move(dist), std::vector<std::size_t>(n_nodes, n_nodes), std::nullopt};
  for (std::size_t round = 0; round < n_nodes; ++round) {
    r.relaxed_last.reset();
    for (const auto& e : edges) {
      if (r.dist[e.from] == kInf) continue;
      const double cand = r.dist[e.from] + e.w;
      if (cand < r.dist[e.to] - kRelaxEps) {
        r.dist[e.to] = cand;
        r.pred[e.to] = e.from;
        r.relaxed_last = e.to;
      }
    }
    if (!r.relaxed_last) break;
  }
  return r;
}

std::vector<std::size_t> extract_cycle(const BellmanFord& bf, std::size_t n_nodes) {
  std::size_t v = *bf.relaxed_last;
  for (std::size_t k = 0; k < n_nodes; ++k) v = bf.pred[v];
  std::vector<std::size_t> cycle{v};
  for (std::size_t u = bf.pred[v]; u != v; u = bf.pred[u]) cycle.push_back(u);
  std::reverse(cycle.begin(), cycle.end());
  return cycle;
}

}  // namespace

DcsResult solve_difference_constraints(const DifferenceConstraintSystem& sys) {
  const std::size_t nv = sys.n_vars();
  const std::size_t s = nv;
  const std::size_t n_nodes = nv + 1;
  const auto edges = build_edges(sys);

  // Phase 1: all nodes start at 0, as if joined to a virtual super-source.
  const BellmanFord phase1 = bellman_ford(n_nodes, edges, std::vector<double>(n_nodes, 0.0));
  DcsResult out;
  if (phase1.relaxed_last) {
    out.negative_cycle = extract_cycle(phase1, n_nodes);
    return out;
  }
  out.feasible = true;

  // Phase 2: shortest paths from the box source give the largest values.
  std::vector<double> init(n_nodes, kInf);
  init[s] = 0.0;
  const BellmanFord phase2 = bellman_ford(n_nodes, edges, std::move(init));

  std::vector<double> y(nv);
  std::vector<bool> bounded(nv);
  for (std::size_t i = 0; i < nv; ++i) bounded[i] = phase2.dist[i] < kInf;

  // Unbounded variables: phase-1 potentials (relative to the source) shifted
  // up by the least K >= 0 satisfying every edge into the bounded part.
  double shift = 0.0;
  const double ps = phase1.dist[s];
  for (const auto& e : edges) {
    const bool from_free = e.from != s && !bounded[e.from];
    const bool to_free = e.to != s && !bounded[e.to];
    if (!from_free || to_free) continue;
    const double target = e.to == s ? 0.0 : phase2.dist[e.to];
    shift = std::max(shift, target - e.w - (phase1.dist[e.from] - ps));
  }
  for (std::size_t i = 0; i < nv; ++i) y[i] = bounded[i] ? phase2.dist[i] : phase1.dist[i] - ps + shift;
  out.assignment = std::move(y);
  return out;
}

DifferenceConstraintSystem interpolation_constraints(const PointSet& xs, const std::vector<Point>& ps,
                                                     const KernelRep& kernel) {
  if (ps.size() != xs.size()) throw precondition_error("interpolation constraints: one dual point per sample");
  DifferenceConstraintSystem sys(xs.size());
  for (std::size_t m = 0; m < xs.size(); ++m) {
    const ExtReal bmp = kernel.eval(xs[m], ps[m]);
    if (!bmp.is_finite()) throw precondition_error("interpolation constraints: b(x_m, p_m) must be finite");
    for (std::size_t n = 0; n < xs.size(); ++n)
      if (n != m) sys.add(n, m, lower_sub(kernel.eval(xs[n], ps[m]), bmp));
  }
  return sys;
}

namespace {

double loss_of(Loss loss, const std::vector<double>& y, const std::vector<double>& ybar) {
  double acc = 0.0;
  for (std::size_t m = 0; m < y.size(); ++m)
    acc = loss == Loss::sup_norm ? std::max(acc, std::abs(y[m] - ybar[m])) : acc + std::abs(y[m] - ybar[m]);
  return acc;
}

DifferenceConstraintSystem with_boxes(DifferenceConstraintSystem sys, const std::vector<double>& ybar, double eps) {
  for (std::size_t m = 0; m < ybar.size(); ++m) sys.set_box(m, {ybar[m] - eps, ybar[m] + eps});
  return sys;
}

std::vector<double> solve_sup_norm(const DifferenceConstraintSystem& sys, const std::vector<double>& ybar,
                                   double tol) {
  if (auto exact = solve_difference_constraints(with_boxes(sys, ybar, 0.0)); exact.feasible) return exact.assignment;

  const DcsResult free = solve_difference_constraints(sys);
  if (!free.feasible) throw precondition_error("regress: dual points admit no interpolating values");
  // Best constant shift of a feasible point bounds the optimum from above.
  double lo_d = kInf, hi_d = -kInf;
  for (std::size_t m = 0; m < ybar.size(); ++m) {
    lo_d = std::min(lo_d, free.assignment[m] - ybar[m]);
    hi_d = std::max(hi_d, free.assignment[m] - ybar[m]);
  }
  const auto [ymin, ymax] = std::minmax_element(ybar.begin(), ybar.end());
  double lo = 0.0;
  double hi = std::max(*ymax - *ymin, (hi_d - lo_d) / 2.0);
  if (!solve_difference_constraints(with_boxes(sys, ybar, hi)).feasible) hi = (hi_d - lo_d) / 2.0 + tol;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (solve_difference_constraints(with_boxes(sys, ybar, mid)).feasible ? hi : lo) = mid;
  }
  auto r = solve_difference_constraints(with_boxes(sys, ybar, hi));
  if (!r.feasible) throw precondition_error("regress: sup-norm bisection lost feasibility");
  return r.assignment;
}

// Exact line search of sum |y - ybar| along d in {+1, -1} on the set S,
// limited by the tightest crossing constraint.
double best_step(const DifferenceConstraintSystem& sys, const std::vector<double>& y, const std::vector<double>& ybar,
                 const std::vector<bool>& in_s, double dir) {
  double tmax = kInf;
  for (const auto& c : sys.constraints()) {
    const double slack = (y[c.n] - y[c.m]) - c.bound.value();
    // d(y_n - y_m)/dt
    const double rate = dir * ((in_s[c.n] ? 1.0 : 0.0) - (in_s[c.m] ? 1.0 : 0.0));
    if (rate < 0.0) tmax = std::min(tmax, std::max(0.0, slack));
  }
  std::vector<double> cands;
  for (std::size_t m = 0; m < y.size(); ++m) {
    if (!in_s[m]) continue;
    const double t = (ybar[m] - y[m]) * dir;
    if (t > 0.0 && t <= tmax) cands.push_back(t);
  }
  if (tmax < kInf) cands.push_back(tmax);
  double best_t = 0.0, best_v = loss_of(Loss::l1, y, ybar);
  for (double t : cands) {
    std::vector<double> z = y;
    for (std::size_t m = 0; m < y.size(); ++m)
      if (in_s[m]) z[m] += dir * t;
    const double v = loss_of(Loss::l1, z, ybar);
    if (v < best_v - 1e-13) best_v = v, best_t = t;
  }
  return best_t;
}

// Directional derivative of the l1 loss along dir * 1_S, or +inf when the
// direction leaves the feasible set at once.
double l1_slope(const DifferenceConstraintSystem& sys, const std::vector<double>& y, const std::vector<double>& ybar,
                const std::vector<bool>& in_s, double dir, double tol) {
  for (const auto& c : sys.constraints()) {
    const double slack = (y[c.n] - y[c.m]) - c.bound.value();
    const double rate = dir * ((in_s[c.n] ? 1.0 : 0.0) - (in_s[c.m] ? 1.0 : 0.0));
    if (rate < 0.0 && slack <= tol) return kInf;
  }
  double slope = 0.0;
  for (std::size_t m = 0; m < y.size(); ++m) {
    if (!in_s[m]) continue;
    const double r = (y[m] - ybar[m]) * dir;
    slope += r < -tol ? -1.0 : 1.0;
  }
  return slope;
}

constexpr std::size_t kMaxCertifiedL1 = 16;

// Descent over directions ±1_S. With every subset available, a point with no
// descent direction is a global minimum: feasible directions decompose into
// nonnegative sums of such indicators along which the slope is additive.
std::vector<double> solve_l1(const DifferenceConstraintSystem& sys, std::vector<double> y,
                             const std::vector<double>& ybar, double tol, bool& certified) {
  const std::size_t n = y.size();
  certified = n <= kMaxCertifiedL1;
  std::vector<std::vector<bool>> dirs;
  if (certified) {
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
      std::vector<bool> s(n);
      for (std::size_t m = 0; m < n; ++m) s[m] = (mask >> m) & 1U;
      dirs.push_back(std::move(s));
    }
  } else {
    for (std::size_t m = 0; m < n; ++m) {
      std::vector<bool> s(n, false);
      s[m] = true;
      dirs.push_back(std::move(s));
    }
  }
  for (int iter = 0; iter < 100000; ++iter) {
    double best_slope = -0.5;
    const std::vector<bool>* best_s = nullptr;
    double best_dir = 0.0;
    for (const auto& s : dirs)
      for (double dir : {1.0, -1.0}) {
        const double sl = l1_slope(sys, y, ybar, s, dir, tol);
        if (sl < best_slope) best_slope = sl, best_s = &s, best_dir = dir;
      }
    if (!best_s) return y;
    const double t = best_step(sys, y, ybar, *best_s, best_dir);
    if (t <= 0.0) {
      certified = false;
      return y;
    }
    for (std::size_t m = 0; m < n; ++m)
      if ((*best_s)[m]) y[m] += best_dir * t;
  }
  certified = false;
  return y;
}

RegressResult regress_fixed(const SampleSet& samples, const KernelRep& kernel, const std::vector<Point>& ps,
                            Loss loss, double tol) {
  const auto sys = interpolation_constraints(*samples.xs, ps, kernel);
  RegressResult r;
  r.witnesses = ps;
  r.y_star = solve_sup_norm(sys, samples.ys, tol);
  if (loss == Loss::l1) r.y_star = solve_l1(sys, r.y_star, samples.ys, tol, r.certified);
  r.loss_value = loss_of(loss, r.y_star, samples.ys);
  return r;
}

double max_violation_on_targets(const ExtMatrix& bx, std::size_t m, std::size_t p, const std::vector<double>& ys) {
  const ExtReal bmp = bx(m, p);
  if (!bmp.is_finite()) return kInf;
  double v = 0.0;
  for (std::size_t n = 0; n < ys.size(); ++n) {
    const ExtReal c = lower_sub(bx(n, p), bmp);
    if (c.is_finite()) v = std::max(v, c.value() - (ys[n] - ys[m]));
  }
  return v;
}

}  // namespace

RegressResult regress(const SampleSet& samples, const KernelRep& kernel, const RegressOptions& opts) {
  samples.validate();
  if (!opts.fixed_p.empty()) return regress_fixed(samples, kernel, opts.fixed_p, opts.loss, opts.tol);

  const PointSet& cand = *samples.dual_candidates;
  const ExtMatrix bx = kernel.matrix(*samples.xs, cand);
  const std::size_t n = samples.size();

  std::vector<std::size_t> choice(n);
  for (std::size_t m = 0; m < n; ++m) {
    double best = kInf;
    for (std::size_t p = 0; p < cand.size(); ++p)
      if (double v = max_violation_on_targets(bx, m, p, samples.ys); v < best) best = v, choice[m] = p;
    if (best == kInf) throw precondition_error("regress: no dual candidate with b(x_m, p) finite");
  }

  auto points_of = [&](const std::vector<std::size_t>& c) {
    std::vector<Point> ps;
    for (auto i : c) ps.push_back(cand[i]);
    return ps;
  };
  auto attempt = [&](const std::vector<std::size_t>& c) -> std::optional<RegressResult> {
    try {
      return regress_fixed(samples, kernel, points_of(c), opts.loss, opts.tol);
    } catch (const precondition_error&) {
      return std::nullopt;
    }
  };

  std::optional<RegressResult> best = attempt(choice);
  for (bool improved = true; improved;) {
    improved = false;
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t p = 0; p < cand.size(); ++p) {
        if (p == choice[m]) continue;
        auto trial = choice;
        trial[m] = p;
        auto r = attempt(trial);
        if (r && (!best || r->loss_value < best->loss_value - 1e-12)) {
          best = std::move(r);
          choice = trial;
          improved = true;
        }
      }
  }
  if (!best) throw precondition_error("regress: no feasible choice of dual points found");
  best->heuristic = true;
  return *best;
}

StoppingCost reconstruct_stopping_cost(const PointSet& xs, const std::vector<double>& ys, const KernelRep& kernel,
                                       const PointSetPtr& grid, Loss loss) {
  if (!is_idempotent(kernel.matrix(*grid))) throw precondition_error("reconstruct_stopping_cost: kernel must be idempotent");
  SampleSet samples{make_points(xs), ys, grid};
  const RegressResult fit = regress(samples, kernel, {loss, xs.points(), kConstraintTol});
  std::vector<ExtReal> w(grid->size(), ExtReal::pos_inf());
  for (std::size_t m = 0; m < xs.size(); ++m) w[grid->index_of(xs[m])] = -fit.y_star[m];
  std::vector<F0Term> terms;
  for (std::size_t m = 0; m < xs.size(); ++m) {
    const ExtReal bmm = kernel.eval(xs[m], xs[m]);
    if (!bmm.is_finite()) throw precondition_error("reconstruct_stopping_cost: b(x_m, x_m) must be finite");
    terms.push_back({xs[m], fit.y_star[m] - bmm.value()});
  }
  return {GridFunction(grid, std::move(w)), fit.y_star, F0(kernel, std::move(terms))};
}

}  // namespace tropk
