#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "support.hpp"
#include "tropk/conjugation.hpp"
#include "tropk/errors.hpp"

using namespace tropk;
using support::fn;

namespace {

const ExtReal N = ExtReal::neg_inf();
const ExtReal P = ExtReal::pos_inf();

ConjugationOp conv_on(int lo, int hi) {
  return ConjugationOp(KernelRep::closed_form(KernelFamily::conv), support::integer_line(lo, hi));
}

ConjugationOp random_integer_op(std::mt19937_64& rng, std::size_t rows, std::size_t cols, double p_neg_inf) {
  std::uniform_int_distribution<int> val(-4, 4);
  std::bernoulli_distribution ninf(p_neg_inf);
  ExtMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = ninf(rng) ? N : ExtReal(val(rng));
  std::vector<double> xs(cols), ys(rows);
  std::iota(xs.begin(), xs.end(), 0.0);
  std::iota(ys.begin(), ys.end(), 0.0);
  return ConjugationOp(m, support::line(xs), support::line(ys));
}

ConjugationOp random_tpsd_op(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> phi(-3, 3), off(-4, 0);
  std::bernoulli_distribution ninf(0.2);
  std::vector<double> p(n);
  for (auto& v : p) v = phi(rng);
  ExtMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const ExtReal b0 = i == j ? ExtReal(0.0) : ninf(rng) ? N : ExtReal(off(rng));
      g(i, j) = g(j, i) = lower_add(b0, p[i] + p[j]);
    }
  std::vector<double> xs(n);
  std::iota(xs.begin(), xs.end(), 0.0);
  const auto pts = support::line(xs);
  return ConjugationOp(g, pts, pts);
}

ExtReal grid_min(const GridFunction& f) {
  ExtReal m = P;
  for (const auto& v : f.values()) m = min(m, v);
  return m;
}

}  // namespace

TEST_CASE("sesquilinear conjugate examples") {
  const auto pts = support::integer_line(-1, 1);
  const ConjugationOp dirac(KernelRep::closed_form(KernelFamily::dirac), pts);
  CHECK(conj_sesqui(dirac, fn(pts, {2.0, -1.0, P})).values() == std::vector<ExtReal>{-2.0, 1.0, N});

  const auto conv = conv_on(-1, 1);
  CHECK(conj_sesqui(conv, fn(pts, {1.0, 0.0, 1.0})).values() == std::vector<ExtReal>{0.0, 0.0, 0.0});
  CHECK(conj_sesqui(conv, GridFunction(pts, P)).values() == std::vector<ExtReal>{N, N, N});

  const auto other = support::integer_line(0, 1);
  CHECK_THROWS_AS(conj_sesqui(conv, GridFunction(other, 0.0)), tropk::domain_error);
}

TEST_CASE("linear operator examples") {
  const auto pts = support::integer_line(-1, 1);
  const ConjugationOp dirac(KernelRep::closed_form(KernelFamily::dirac), pts);
  const auto f = fn(pts, {3.0, N, -2.0});
  CHECK(apply_linear(dirac, f).values() == f.values());

  const auto conv = conv_on(-1, 1);
  for (std::size_t k = 0; k < 3; ++k) {
    const auto section = apply_linear(conv, dirac_at(pts, k, DiracKind::bottom));
    for (std::size_t i = 0; i < 3; ++i) CHECK(section[i] == conv.matrix()(i, k));
  }
  CHECK(apply_linear(conv, GridFunction(pts, N)).values() == std::vector<ExtReal>{N, N, N});
}

TEST_CASE("rectangular operators map domain to codomain") {
  const auto xs = support::integer_line(0, 2);
  const auto ys = support::line({-1.0, 1.0});
  const ConjugationOp op(KernelRep::closed_form(KernelFamily::conv), xs, ys);
  const auto out = conj_sesqui(op, fn(xs, {0.0, 0.0, 0.0}));
  REQUIRE(out.size() == 2);
  CHECK(out[0] == ExtReal(0.0));
  CHECK(out[1] == ExtReal(2.0));
  CHECK(op.adjoint().matrix() == op.matrix().transpose());
}

TEST_CASE("duality product") {
  const auto pts = support::integer_line(0, 3);
  const auto f = fn(pts, {1.0, -2.0, 5.0, 0.5});
  for (std::size_t x = 0; x < 4; ++x) CHECK(duality_product(dirac_at(pts, x, DiracKind::top), f) == f[x]);
  CHECK(duality_product(f, f) == ExtReal(0.0));
  CHECK(duality_product(f, GridFunction(pts, N)) == N);

  const auto conv = conv_on(-2, 2);
  for (std::size_t x = 0; x < 5; ++x)
    for (std::size_t y = 0; y < 5; ++y) {
      const auto dx = dirac_at(conv.domain(), x, DiracKind::top);
      const auto dy = dirac_at(conv.domain(), y, DiracKind::top);
      CHECK(duality_product(dx, conj_sesqui(conv, dy)) == conv.matrix()(x, y));
    }
}

TEST_CASE("range membership examples") {
  const auto conv = conv_on(-1, 1);
  const auto bump = is_in_range(conv, fn(conv.domain(), {-1.0, 0.0, -1.0}));
  CHECK_FALSE(bump.in_range);
  CHECK(bump.biconjugate.values() == std::vector<ExtReal>{-1.0, -1.0, -1.0});
  CHECK(bump.gap.values() == std::vector<ExtReal>{0.0, 1.0, 0.0});

  CHECK(is_in_range(conv, fn(conv.domain(), {1.0, 0.0, 1.0})).in_range);

  std::mt19937_64 rng(1);
  const auto pts = support::integer_line(0, 4);
  const ConjugationOp dirac(KernelRep::closed_form(KernelFamily::dirac), pts);
  for (int t = 0; t < 20; ++t) CHECK(is_in_range(dirac, support::random_fn(rng, pts, -5, 5, 0.2, 0.2)).in_range);

  const ConjugationOp asym(ExtMatrix{{0.0, 1.0}, {0.0, 0.0}}, support::integer_line(0, 1), support::integer_line(0, 1));
  CHECK_THROWS_AS(is_in_range(asym, GridFunction(asym.domain(), 0.0)), precondition_error);
}

TEST_CASE("random conjugates are in the range") {
  std::mt19937_64 rng(2);
  const auto conv = conv_on(-3, 3);
  for (int t = 0; t < 100; ++t) {
    const auto g = conj_sesqui(conv, support::random_fn(rng, conv.domain(), -6, 6, 0.2));
    CHECK(is_in_range(conv, g, 0.0).in_range);
  }
}

TEST_CASE("discrepancy d_B") {
  const auto pts = support::integer_line(0, 1);
  const ConjugationOp lip(KernelRep::closed_form(KernelFamily::lip), pts);
  // Direct evaluation of the four brackets gives 1/2 (0 + 0 + 1 + 1).
  CHECK(discrepancy_dB(lip, fn(pts, {0.0, 1.0}), fn(pts, {1.0, 0.0})) == ExtReal(1.0));

  std::mt19937_64 rng(3);
  const auto line = support::integer_line(0, 6);
  const ConjugationOp lip6(KernelRep::closed_form(KernelFamily::lip), line);
  for (int t = 0; t < 200; ++t) {
    const auto f = support::random_fn(rng, line, -4, 4);
    CHECK(discrepancy_dB(lip6, f, f) == ExtReal(0.0));

    // 1-Lipschitz functions: sup over a Lipschitz envelope of random values.
    auto lipschitz = [&] {
      auto h = support::random_fn(rng, line, -4, 4);
      GridFunction out(line, P);
      for (std::size_t x = 0; x < 7; ++x)
        for (std::size_t y = 0; y < 7; ++y)
          out[x] = min(out[x], ExtReal(h[y].value() + std::abs(double(x) - double(y))));
      return out;
    };
    const auto a = lipschitz(), b = lipschitz();
    GridFunction sum(line, 0.0);
    for (std::size_t x = 0; x < 7; ++x) sum[x] = a[x].value() + b[x].value();
    const double expected = grid_min(sum).value() - grid_min(a).value() - grid_min(b).value();
    CHECK(discrepancy_dB(lip6, a, b) == ExtReal(expected));
  }

  const ConjugationOp asym(ExtMatrix{{0.0, 1.0}, {0.0, 0.0}}, pts, pts);
  CHECK_THROWS_AS(discrepancy_dB(asym, fn(pts, {0.0, 0.0}), fn(pts, {0.0, 0.0})), precondition_error);
}

TEST_CASE("d_B vanishes for Lipschitz functions with a common minimizer") {
  const auto line = support::integer_line(0, 4);
  const ConjugationOp lip(KernelRep::closed_form(KernelFamily::lip), line);
  const auto f = fn(line, {2.0, 1.0, 0.0, 1.0, 2.0});
  const auto g = fn(line, {0.5, 0.0, -1.0, -1.0, 0.0});
  CHECK(discrepancy_dB(lip, f, g) == ExtReal(0.0));
}

TEST_CASE("monotonicity and Cauchy-Schwarz on tpsd kernels") {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 50; ++k) {
    const auto op = random_tpsd_op(rng, 5);
    for (int t = 0; t < 10; ++t) {
      const auto f = support::random_fn(rng, op.domain(), -5, 5, 0.2);
      const auto g = support::random_fn(rng, op.domain(), -5, 5, 0.2);
      const auto r = check_monotone(op, f, g);
      CHECK(r.holds_pair);
      CHECK(r.holds_max);
      const auto same = check_monotone(op, f, f);
      CHECK(same.holds_pair);
      CHECK(same.holds_max);
      std::vector<GridFunction> cyc;
      const int m = 2 + t % 4;
      for (int i = 0; i < m; ++i) cyc.push_back(support::random_fn(rng, op.domain(), -5, 5, 0.2));
      const auto c = check_cyclic_monotone(op, cyc);
      CHECK(c.holds_sum);
      CHECK(c.holds_max);
    }
  }
}

TEST_CASE("the Dirac witness breaks Cauchy-Schwarz off tpsd") {
  const auto pts = support::integer_line(0, 1);
  const ConjugationOp op(ExtMatrix{{0.0, 1.0}, {1.0, 0.0}}, pts, pts);
  const auto f = cauchy_schwarz_witness(op, 0);
  const auto g = cauchy_schwarz_witness(op, 1);
  CHECK(f.values() == std::vector<ExtReal>{0.0, P});
  CHECK(duality_product(f, conj_sesqui(op, f)) == ExtReal(0.0));
  CHECK_FALSE(check_monotone(op, f, g).holds_max);

  std::mt19937_64 rng(5);
  int seen = 0;
  while (seen < 50) {
    const auto plain = oracle::random_symmetric(rng, 4, -3, 3, 0.1);
    const auto g4 = support::to_matrix(plain);
    const auto rep = is_tpsd_pairwise(g4);
    if (rep.tpsd) continue;
    ++seen;
    const auto p4 = support::integer_line(0, 3);
    const ConjugationOp o(g4, p4, p4);
    const auto [x, y] = *rep.witness;
    CHECK_FALSE(check_monotone(o, cauchy_schwarz_witness(o, x), cauchy_schwarz_witness(o, y)).holds_max);
  }
}

TEST_CASE("triple identity holds exactly") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 200; ++t) {
    const auto op = random_integer_op(rng, 4, 6, 0.2);
    const auto f = support::random_fn(rng, op.domain(), -5, 5, 0.2, 0.1);
    const auto once = conj_sesqui(op, f);
    const auto thrice = conj_sesqui(op, conj_sesqui(op.adjoint(), once));
    CHECK(thrice.values() == once.values());
  }
  const auto conv = conv_on(-3, 3);
  for (int t = 0; t < 100; ++t) {
    const auto f = support::random_fn(rng, conv.domain(), -9, 9, 0.3);
    const auto once = conj_sesqui(conv, f);
    CHECK(conj_sesqui(conv, conj_sesqui(conv, once)).values() == once.values());
  }
}

TEST_CASE("closure order, antitonicity and sesquilinearity") {
  std::mt19937_64 rng(7);
  const auto conv = conv_on(-3, 3);
  const auto d = conv.domain();
  for (int t = 0; t < 200; ++t) {
    const auto f = support::random_fn(rng, d, -9, 9, 0.2);
    const auto g = support::random_fn(rng, d, -9, 9, 0.2);
    CHECK(support::pointwise_le(conj_sesqui(conv, conj_sesqui(conv, g)), g));

    const auto lo = pointwise_min(f, g);
    CHECK(support::pointwise_le(conj_sesqui(conv, f), conj_sesqui(conv, lo)));
    CHECK(conj_sesqui(conv, lo).values() == pointwise_max(conj_sesqui(conv, f), conj_sesqui(conv, g)).values());

    const double lambda = std::uniform_int_distribution<int>(-5, 5)(rng);
    CHECK(conj_sesqui(conv, upper_shift(f, lambda)).values() == lower_shift(conj_sesqui(conv, f), -lambda).values());
  }
}

TEST_CASE("reproducing chain on the range") {
  std::mt19937_64 rng(8);
  const auto conv = conv_on(-3, 3);
  const auto d = conv.domain();
  for (int t = 0; t < 50; ++t) {
    const auto g = conj_sesqui(conv, support::random_fn(rng, d, -9, 9));
    const auto gb = conj_sesqui(conv, g);
    for (std::size_t x = 0; x < d->size(); ++x)
      CHECK(duality_product(gb, conj_sesqui(conv, dirac_at(d, x, DiracKind::top))) == g[x]);
  }
}

TEST_CASE("Funk kernel") {
  const auto line = support::integer_line(0, 4);
  const ConjugationOp lip(KernelRep::closed_form(KernelFamily::lip), line);
  const ExtMatrix c = funk_kernel(lip);
  for (std::size_t x = 0; x < 5; ++x)
    for (std::size_t y = 0; y < 5; ++y) CHECK(c(x, y) == ExtReal(std::abs(double(x) - double(y))));

  const auto conv = conv_on(-1, 1);
  const ExtMatrix cc = funk_kernel(conv);
  for (std::size_t x = 0; x < 3; ++x)
    for (std::size_t y = 0; y < 3; ++y) CHECK(cc(x, y) == ExtReal(std::abs(double(x) - double(y))));

  const auto pts = support::integer_line(0, 1);
  const ConjugationOp dead(ExtMatrix{{N, N}, {N, 0.0}}, pts, pts);
  CHECK(funk_kernel(dead)(1, 1) == ExtReal(0.0));
}

TEST_CASE("Funk sandwich on the range") {
  std::mt19937_64 rng(9);
  const auto conv = conv_on(-3, 3);
  const auto d = conv.domain();
  const ExtMatrix c = funk_kernel(conv);
  for (int t = 0; t < 100; ++t) {
    const auto g = conj_sesqui(conv, support::random_fn(rng, d, -9, 9, 0.2));
    for (std::size_t x = 0; x < d->size(); ++x)
      for (std::size_t y = 0; y < d->size(); ++y) CHECK(g[x] <= upper_add(g[y], c(x, y)));
  }
}
