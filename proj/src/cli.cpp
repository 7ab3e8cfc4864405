#include "tropk/cli.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "tropk/conjugation.hpp"
#include "tropk/control.hpp"
#include "tropk/errors.hpp"
#include "tropk/kernels.hpp"
#include "tropk/linear_theory.hpp"
#include "tropk/representer.hpp"

namespace tropk::cli {

using io::json;
using io::schema_error;

namespace {

struct Context {
  const json& in;
  std::uint64_t seed;
  std::optional<double> tol;

  double tol_or(double fallback) const { return tol.value_or(fallback); }
};

std::string get_string(const json& doc, const std::string& ptr) {
  const json& v = io::at(doc, ptr);
  if (!v.is_string()) throw schema_error(ptr, "expected a string");
  return v.get<std::string>();
}

bool get_bool(const json& doc, const std::string& ptr, bool fallback) {
  if (!io::has(doc, ptr)) return fallback;
  const json& v = io::at(doc, ptr);
  if (!v.is_boolean()) throw schema_error(ptr, "expected a boolean");
  return v.get<bool>();
}

std::size_t get_index(const json& doc, const std::string& ptr) {
  const json& v = io::at(doc, ptr);
  if (!v.is_number_integer() || v.get<long long>() < 0) throw schema_error(ptr, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

Lagrangian lagrangian_from_json(const json& doc, const std::string& ptr) {
  const std::string kind = get_string(doc, ptr + "/kind");
  const double scale = io::has(doc, ptr + "/scale") ? io::finite_from_json(doc, ptr + "/scale") : 1.0;
  if (kind == "quadratic") return Lagrangian::quadratic(scale);
  if (kind == "absolute") return Lagrangian::absolute(scale);
  if (kind == "table")
    return Lagrangian::table(io::finite_list_from_json(doc, ptr + "/velocities"),
                             io::finite_list_from_json(doc, ptr + "/values"));
  throw schema_error(ptr + "/kind", "expected quadratic, absolute or table");
}

struct LoadedKernel {
  KernelRep kernel;
  PointSetPtr points;
};

LoadedKernel kernel_from_json(const json& doc, const std::string& ptr, const std::string& points_ptr) {
  const std::string type = get_string(doc, ptr + "/type");
  if (type == "gram") {
    auto pts = make_points(io::points_from_json(doc, ptr + "/points"));
    ExtMatrix m = io::matrix_from_json(doc, ptr + "/matrix");
    if (!m.square() || m.rows() != pts->size())
      throw schema_error(ptr + "/matrix", "must be square with one row per point");
    KernelRep k = KernelRep::gram(pts, std::move(m));
    auto eval_pts = io::has(doc, points_ptr) ? make_points(io::points_from_json(doc, points_ptr)) : pts;
    return {std::move(k), eval_pts};
  }
  if (type == "closed_form") {
    const std::string name = get_string(doc, ptr + "/name");
    const auto family = parse_kernel_family(name);
    if (!family) throw schema_error(ptr + "/name", "unknown kernel family");
    ClosedFormKernel spec{*family};
    const std::string params = ptr + "/params";
    if (io::has(doc, params + "/scale")) spec.scale = io::finite_from_json(doc, params + "/scale");
    if (io::has(doc, params + "/exponent")) spec.exponent = io::finite_from_json(doc, params + "/exponent");
    if (io::has(doc, params + "/lagrangian")) spec.lagrangian = lagrangian_from_json(doc, params + "/lagrangian");
    const bool spacetime = *family == KernelFamily::lax_hopf;
    return {KernelRep::closed_form(spec), make_points(io::points_from_json(doc, points_ptr, spacetime))};
  }
  throw schema_error(ptr + "/type", "expected \"gram\" or \"closed_form\"");
}

std::vector<double> coords_from_json(const json& doc, const std::string& ptr) {
  return io::at(doc, ptr).is_array() ? io::finite_list_from_json(doc, ptr)
                                     : std::vector<double>{io::finite_from_json(doc, ptr)};
}

MaupertuisProblem problem_from_json(const json& doc, const std::string& ptr) {
  TimeGrid tg{io::finite_from_json(doc, ptr + "/time_grid/t0"), io::finite_from_json(doc, ptr + "/time_grid/T"),
              io::finite_from_json(doc, ptr + "/time_grid/dt")};
  SpaceGrid sg{coords_from_json(doc, ptr + "/space_grid/lo"), coords_from_json(doc, ptr + "/space_grid/hi"),
               io::finite_from_json(doc, ptr + "/space_grid/dr")};
  if (sg.lo.size() != sg.hi.size()) throw schema_error(ptr + "/space_grid/hi", "dimension differs from lo");
  Lagrangian lag = lagrangian_from_json(doc, ptr + "/lagrangian");

  std::vector<Move> moves;
  const std::string st = ptr + "/stencil";
  if (io::has(doc, st + "/moves")) {
    const json& arr = io::at(doc, st + "/moves");
    if (!arr.is_array()) throw schema_error(st + "/moves", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string mp = st + "/moves/" + std::to_string(i);
      Move mv{get_index(doc, mp + "/layers"), {}};
      for (double d : coords_from_json(doc, mp + "/displacement")) mv.displacement.push_back(static_cast<int>(d));
      moves.push_back(std::move(mv));
    }
  } else {
    std::optional<std::size_t> k;
    std::optional<int> j;
    if (io::has(doc, st + "/max_layers")) k = get_index(doc, st + "/max_layers");
    if (io::has(doc, st + "/max_displacement")) j = static_cast<int>(get_index(doc, st + "/max_displacement"));
    moves = MaupertuisProblem::default_stencil(tg, sg, k, j);
  }
  return MaupertuisProblem(tg, sg, std::move(lag), std::move(moves));
}

GridFunction function_from_json(const json& doc, const std::string& ptr, const PointSetPtr& domain) {
  auto vals = io::ext_list_from_json(doc, ptr);
  if (vals.size() != domain->size()) throw schema_error(ptr, "expected one value per point");
  return GridFunction(domain, std::move(vals));
}

std::string csv_of(const GridFunction& f, std::vector<std::string> names) {
  std::ostringstream os;
  io::write_csv(os, f, names);
  return os.str();
}

std::vector<std::string> spacetime_names(std::size_t dim) {
  std::vector<std::string> n{"t"};
  for (std::size_t k = 1; k < dim; ++k) n.push_back(dim == 2 ? "r" : "r" + std::to_string(k - 1));
  return n;
}

json tpsd_json(const TpsdReport& r) {
  json out{{"tpsd", r.tpsd}};
  out["failure"] = r.failure == TpsdFailure::none ? json(nullptr)
                   : r.failure == TpsdFailure::symmetry ? json("symmetry")
                                                        : json("positivity");
  out["witness"] = r.witness ? json{r.witness->first, r.witness->second} : json(nullptr);
  return out;
}

json f0_json(const F0& f0) {
  json terms = json::array();
  for (const auto& t : f0.terms()) terms.push_back({{"p", io::to_json(t.p)}, {"offset", t.offset}});
  return {{"terms", terms}};
}

// --- commands ---------------------------------------------------------------

Outcome cmd_check_tpsd(const Context& c) {
  const auto [kernel, points] = kernel_from_json(c.in, "/kernel", "/points");
  const ExtMatrix g = kernel.matrix(*points);
  const double tol = c.tol_or(kPositivityTol);
  json out = tpsd_json(is_tpsd_pairwise(g, tol));
  const std::size_t m_max = io::has(c.in, "/m_max") ? get_index(c.in, "/m_max")
                                                   : std::min<std::size_t>(points->size(), 5);
  const PermutationReport perm = check_permutation_positivity(g, m_max, tol);
  out["permutation_check"] = {{"m_max", m_max}, {"holds", perm.holds}};
  if (!perm.holds) {
    out["permutation_check"]["subset"] = perm.subset;
    out["permutation_check"]["permutation"] = perm.permutation;
  }
  if (get_bool(c.in, "/monge", false)) {
    const auto v = monge_violation(g, tol);
    out["monge"] = {{"monge", !v}, {"violation", v ? json(*v) : json(nullptr)}};
  }
  return {ExitCode::ok, out, std::nullopt};
}

Outcome cmd_factorize(const Context& c) {
  const auto [kernel, points] = kernel_from_json(c.in, "/kernel", "/points");
  const ExtMatrix g = kernel.matrix(*points);
  const PhiB0 d = decompose_phi_b0(g);
  const FeatureMap fm = factorize(g);
  json z = json::array();
  for (auto [u, v] : fm.z_pairs) z.push_back({u, v});
  return {ExitCode::ok,
          {{"phi", io::to_json(d.phi)},
           {"b0", io::to_json(d.b0)},
           {"z", z},
           {"psi", io::to_json(fm.psi)},
           {"recomposition_ok", approx_equal(recompose(fm), g, c.tol_or(kIdentityTol))}},
          std::nullopt};
}

Outcome cmd_conjugate(const Context& c) {
  const auto [kernel, points] = kernel_from_json(c.in, "/kernel", "/points");
  const PointSetPtr codomain = io::has(c.in, "/codomain") ? make_points(io::points_from_json(c.in, "/codomain")) : points;
  const ConjugationOp op(kernel, points, codomain);
  const GridFunction f = function_from_json(c.in, "/function", points);
  const std::string which = io::has(c.in, "/operator") ? get_string(c.in, "/operator") : "sesqui";
  GridFunction r;
  if (which == "sesqui")
    r = conj_sesqui(op, f);
  else if (which == "linear")
    r = apply_linear(op, f);
  else
    throw schema_error("/operator", "expected \"sesqui\" or \"linear\"");
  return {ExitCode::ok, {{"points", io::to_json(*codomain)}, {"result", io::to_json(r.values())}}, csv_of(r, {})};
}

Outcome cmd_membership(const Context& c) {
  const auto [kernel, points] = kernel_from_json(c.in, "/kernel", "/points");
  const ConjugationOp op(kernel, points);
  const RangeMembership r = is_in_range(op, function_from_json(c.in, "/function", points), c.tol_or(kIdentityTol));
  return {ExitCode::ok,
          {{"in_range", r.in_range}, {"biconjugate", io::to_json(r.biconjugate.values())}, {"gap", io::to_json(r.gap.values())}},
          csv_of(r.biconjugate, {})};
}

Outcome cmd_funk(const Context& c) {
  const auto [kernel, points] = kernel_from_json(c.in, "/kernel", "/points");
  return {ExitCode::ok, {{"funk", io::to_json(funk_kernel(ConjugationOp(kernel, points)))}}, std::nullopt};
}

Outcome cmd_cg_kernel(const Context& c) {
  const auto points = make_points(io::points_from_json(c.in, "/points"));
  const json& fam = io::at(c.in, "/family");
  if (!fam.is_array()) throw schema_error("/family", "expected an array of functions");
  std::vector<GridFunction> members;
  for (std::size_t i = 0; i < fam.size(); ++i)
    members.push_back(function_from_json(c.in, "/family/" + std::to_string(i), points));
  const ExtMatrix cg = max_kernel_cG(FunctionFamily(std::move(members)));
  json out{{"c_G", io::to_json(cg)}, {"idempotent", is_idempotent(cg, c.tol_or(1e-9))}};
  std::optional<std::string> csv;
  if (io::has(c.in, "/function")) {
    const GridFunction f = function_from_json(c.in, "/function", points);
    const GridFunction cl = closure_CG(cg, f);
    out["closure"] = io::to_json(cl.values());
    out["lipschitz_member"] = is_lipschitz_member(cg, f, c.tol_or(0.0));
    csv = csv_of(cl, {});
  }
  return {ExitCode::ok, out, csv};
}

Outcome cmd_regularity(const Context& c) {
  const ExtMatrix b = io::matrix_from_json(c.in, "/matrix");
  if (!b.square()) throw schema_error("/matrix", "expected a square matrix");
  const double tol = c.tol_or(1e-9);
  const RegularityResult r = is_von_neumann_regular(b, tol);
  return {ExitCode::ok,
          {{"idempotent", is_idempotent(b, tol)}, {"von_neumann_regular", r.regular}, {"witness", io::to_json(r.witness)}},
          std::nullopt};
}

SampleSet samples_from_json(const json& doc) {
  SampleSet s{make_points(io::points_from_json(doc, "/samples/xs")), io::finite_list_from_json(doc, "/samples/ys"),
              make_points(io::points_from_json(doc, "/dual_candidates"))};
  if (s.ys.size() != s.xs->size()) throw schema_error("/samples/ys", "expected one target per sample point");
  if (s.ys.empty()) throw schema_error("/samples/xs", "at least one sample is required");
  if (s.dual_candidates->empty()) throw schema_error("/dual_candidates", "must be nonempty");
  return s;
}

KernelRep kernel_only(const json& doc) {
  // Closed-form kernels here are evaluated on samples and candidates.
  const std::string type = get_string(doc, "/kernel/type");
  if (type == "closed_form") {
    json tmp = doc;
    tmp["points"] = json::array();
    return kernel_from_json(tmp, "/kernel", "/points").kernel;
  }
  return kernel_from_json(doc, "/kernel", "/kernel/points").kernel;
}

Outcome cmd_interpolate(const Context& c) {
  const KernelRep kernel = kernel_only(c.in);
  const SampleSet s = samples_from_json(c.in);
  const double tol = c.tol_or(kConstraintTol);
  const WitnessResult w = feasible_witnesses(s, kernel, tol);
  if (!w.feasible)
    return {ExitCode::precondition, {{"feasible", false}, {"blocking_index", *w.blocking_index + 1}}, std::nullopt};
  json wit = json::array();
  for (const auto& p : w.witnesses) wit.push_back(io::to_json(p));
  const F0 f0 = build_f0(s, w.witnesses, kernel, tol);
  return {ExitCode::ok, {{"feasible", true}, {"witnesses", wit}, {"f0", f0_json(f0)}}, std::nullopt};
}

Outcome cmd_regress(const Context& c) {
  const KernelRep kernel = kernel_only(c.in);
  const SampleSet s = samples_from_json(c.in);
  RegressOptions opts;
  opts.tol = c.tol_or(kConstraintTol);
  if (io::has(c.in, "/loss")) {
    const std::string loss = get_string(c.in, "/loss");
    if (loss == "sup_norm")
      opts.loss = Loss::sup_norm;
    else if (loss == "l1")
      opts.loss = Loss::l1;
    else
      throw schema_error("/loss", "expected \"sup_norm\" or \"l1\"");
  }
  const std::string mode = io::has(c.in, "/mode") ? get_string(c.in, "/mode") : "search";
  if (mode == "fixed_p") {
    opts.fixed_p = io::points_from_json(c.in, "/p").points();
    if (opts.fixed_p.size() != s.size()) throw schema_error("/p", "expected one dual point per sample");
  } else if (mode != "search") {
    throw schema_error("/mode", "expected \"search\" or \"fixed_p\"");
  }
  const RegressResult r = regress(s, kernel, opts);
  json wit = json::array();
  for (const auto& p : r.witnesses) wit.push_back(io::to_json(p));
  const F0 f0 = build_f0(*s.xs, r.y_star, r.witnesses, kernel, 1e-6);
  return {ExitCode::ok,
          {{"feasible", true},
           {"witnesses", wit},
           {"y_star", r.y_star},
           {"loss_value", r.loss_value},
           {"heuristic", r.heuristic},
           {"certified", r.certified},
           {"f0", f0_json(f0)}},
          std::nullopt};
}

Outcome cmd_maupertuis(const Context& c) {
  const MaupertuisProblem p = problem_from_json(c.in, "/problem");
  const MaupertuisGram g = maupertuis_dp(p);
  json out{{"points", io::to_json(*g.points)}, {"gram", io::to_json(g.matrix)}, {"reversible", p.reversible()}};
  if (get_bool(c.in, "/diagnostics", false)) {
    const double tol = c.tol_or(1e-9);
    out["tpsd"] = is_tpsd_pairwise(g.matrix, tol).tpsd;
    out["idempotent"] = is_idempotent(g.matrix, tol);
    out["asymmetric_idempotent"] = is_idempotent(asymmetrize(*g.points, g.matrix), tol);
  }
  std::ostringstream csv;
  csv.precision(17);
  const auto names = spacetime_names(g.points->dim());
  for (const auto& n : names) csv << n << "_0,";
  for (const auto& n : names) csv << n << "_1,";
  csv << "value\n";
  for (std::size_t i = 0; i < g.points->size(); ++i)
    for (std::size_t j = 0; j < g.points->size(); ++j) {
      for (double x : (*g.points)[i]) csv << x << ',';
      for (double x : (*g.points)[j]) csv << x << ',';
      csv << g.matrix(i, j).to_string() << '\n';
    }
  return {ExitCode::ok, out, csv.str()};
}

Outcome cmd_value_function(const Context& c) {
  const MaupertuisProblem p = problem_from_json(c.in, "/problem");
  const GridFunction psi = function_from_json(c.in, "/psi_T", p.space_points());
  const GridFunction v = value_function(p, psi);
  json out{{"points", io::to_json(*v.domain())}, {"value", io::to_json(v.values())}};
  if (get_bool(c.in, "/check_subsolution", false)) {
    const SubsolutionReport r = largest_subsolution_check(p, maupertuis_dp(p), psi, c.seed);
    out["largest_subsolution"] = {
        {"holds", r.holds}, {"in_range", r.in_range}, {"dominated", r.dominated}, {"samples", r.samples}};
  }
  return {ExitCode::ok, out, csv_of(v, spacetime_names(v.domain()->dim()))};
}

Outcome cmd_invert_stopping_cost(const Context& c) {
  const MaupertuisProblem p = problem_from_json(c.in, "/problem");
  const PointSet xs = io::points_from_json(c.in, "/samples/points", true);
  const auto ys = io::finite_list_from_json(c.in, "/samples/ys");
  if (ys.size() != xs.size()) throw schema_error("/samples/ys", "expected one value per sample point");
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (!p.spacetime_points()->find(xs[i]))
      throw schema_error("/samples/points/" + std::to_string(i), "point is not on the spacetime grid");
  Loss loss = Loss::sup_norm;
  if (io::has(c.in, "/loss") && get_string(c.in, "/loss") == "l1") loss = Loss::l1;
  const StoppingCostInverse r = invert_stopping_cost(maupertuis_dp(p), xs, ys, loss);
  json w = json::array();
  for (std::size_t m = 0; m < xs.size(); ++m) w.push_back({{"point", xs[m]}, {"value", -r.cost.y_star[m]}});
  return {ExitCode::ok,
          {{"y_star", r.cost.y_star}, {"w", w}, {"f0", f0_json(r.cost.f0)}, {"value", io::to_json(r.value.values())}},
          csv_of(r.value, spacetime_names(r.value.domain()->dim()))};
}

Outcome cmd_invert_terminal_cost(const Context& c) {
  const MaupertuisProblem p = problem_from_json(c.in, "/problem");
  const double t0 = io::finite_from_json(c.in, "/t0");
  std::optional<std::size_t> a;
  for (std::size_t k = 0; k < p.n_times(); ++k)
    if (std::abs(p.time().at(k) - t0) <= 1e-9) a = k;
  if (!a) throw schema_error("/t0", "not a time of the grid");
  const PointSet rs = io::points_from_json(c.in, "/samples/rs");
  const auto ys = io::finite_list_from_json(c.in, "/samples/ys");
  if (ys.size() != rs.size()) throw schema_error("/samples/ys", "expected one value per sample point");
  for (std::size_t i = 0; i < rs.size(); ++i)
    if (!p.space_points()->find(rs[i]))
      throw schema_error("/samples/rs/" + std::to_string(i), "point is not on the space grid");
  const TerminalCostInverse r = invert_terminal_cost(p, maupertuis_dp(p), *a, rs, ys);
  if (!r.feasible)
    return {ExitCode::precondition, {{"feasible", false}, {"blocking_index", *r.blocking_index + 1}}, std::nullopt};
  json wit = json::array();
  for (const auto& q : r.witnesses) wit.push_back(io::to_json(q));
  return {ExitCode::ok,
          {{"feasible", true}, {"witnesses", wit}, {"psi_T", io::to_json(r.psi.values())}, {"value", io::to_json(r.value.values())}},
          csv_of(r.value, spacetime_names(r.value.domain()->dim()))};
}

using Handler = std::function<Outcome(const Context&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h{
      {"check-tpsd", cmd_check_tpsd},
      {"factorize", cmd_factorize},
      {"conjugate", cmd_conjugate},
      {"membership", cmd_membership},
      {"funk", cmd_funk},
      {"cg-kernel", cmd_cg_kernel},
      {"regularity", cmd_regularity},
      {"interpolate", cmd_interpolate},
      {"regress", cmd_regress},
      {"maupertuis", cmd_maupertuis},
      {"value-function", cmd_value_function},
      {"invert-stopping-cost", cmd_invert_stopping_cost},
      {"invert-terminal-cost", cmd_invert_terminal_cost},
  };
  return h;
}

Outcome failure(ExitCode code, const std::string& kind, const std::string& msg, const std::string& pointer = {}) {
  json out{{"error", kind}, {"message", msg}};
  if (!pointer.empty()) out["pointer"] = pointer;
  return {code, out, std::nullopt};
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [k, v] : handlers()) n.push_back(k);
    return n;
  }();
  return names;
}

Outcome execute(const std::string& command, const json& input, std::uint64_t seed, std::optional<double> tol) {
  const auto it = handlers().find(command);
  if (it == handlers().end()) return failure(ExitCode::input, "usage", "unknown command: " + command);
  if (!input.is_object()) return failure(ExitCode::input, "schema", "input must be a JSON object", "");
  try {
    return it->second(Context{input, seed, tol});
  } catch (const schema_error& e) {
    return failure(ExitCode::input, "schema", e.what(), e.pointer());
  } catch (const json::exception& e) {
    return failure(ExitCode::input, "schema", e.what());
  } catch (const precondition_error& e) {
    return failure(ExitCode::precondition, "precondition", e.what());
  } catch (const size_error& e) {
    return failure(ExitCode::precondition, "size", e.what());
  } catch (const std::domain_error& e) {
    return failure(ExitCode::input, "domain", e.what());
  } catch (const std::exception& e) {
    return failure(ExitCode::input, "error", e.what());
  }
}

int run(const RunConfig& config) {
  Outcome out;
  std::ifstream in(config.input_path);
  if (!in) {
    out = failure(ExitCode::input, "io", "cannot open input file " + config.input_path);
  } else {
    json doc;
    try {
      doc = json::parse(in);
      out = execute(config.command, doc, config.seed, config.tol);
    } catch (const json::parse_error& e) {
      out = failure(ExitCode::input, "io", std::string("invalid JSON: ") + e.what());
    }
  }

  const std::string text = out.result.dump(2) + "\n";
  if (config.output_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(config.output_path);
    if (!os || !(os << text)) {
      std::cerr << "cannot write " << config.output_path << "\n";
      return static_cast<int>(ExitCode::input);
    }
  }
  if (out.csv && !config.csv_path.empty()) {
    std::ofstream os(config.csv_path);
    if (!os || !(os << *out.csv)) {
      std::cerr << "cannot write " << config.csv_path << "\n";
      return static_cast<int>(ExitCode::input);
    }
  }
  if (out.code != ExitCode::ok && out.result.contains("message"))
    std::cerr << out.result["message"].get<std::string>() << "\n";
  return static_cast<int>(out.code);
}

}  // namespace tropk::cli
