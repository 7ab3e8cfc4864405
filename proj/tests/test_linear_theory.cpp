#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "support.hpp"
#include "tropk/errors.hpp"
#include "tropk/kernels.hpp"
#include "tropk/linear_theory.hpp"

using namespace tropk;
using support::fn;

namespace {

const ExtReal N = ExtReal::neg_inf();
const ExtReal P = ExtReal::pos_inf();

FunctionFamily random_family(std::mt19937_64& rng, const PointSetPtr& d, std::size_t size) {
  std::vector<GridFunction> members;
  while (members.size() < size) {
    auto g = support::random_fn(rng, d, -5, 5, 0.2);
    bool proper = false;
    for (const auto& v : g.values()) proper = proper || v.is_finite();
    if (proper) members.push_back(std::move(g));
  }
  return FunctionFamily(std::move(members));
}

ExtMatrix random_star(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> val(-4, 0);
  std::bernoulli_distribution ninf(0.3);
  ExtMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = i == j ? ExtReal(0.0) : ninf(rng) ? N : ExtReal(val(rng));
  for (;;) {
    const ExtMatrix sq = maxplus_product(m, m);
    if (sq == m) return m;
    m = sq;
  }
}

}  // namespace

TEST_CASE("maximal kernel of a family") {
  const auto pts = support::integer_line(-1, 1);
  const FunctionFamily g({fn(pts, {1.0, 0.0, 1.0}), fn(pts, {-1.0, 0.0, 1.0})});
  CHECK(max_kernel_cG(g) == ExtMatrix{{0, -1, -2}, {-1, 0, -1}, {0, 1, 0}});

  const FunctionFamily single({fn(pts, {2.0, -1.0, 0.5})});
  const ExtMatrix c = max_kernel_cG(single);
  CHECK(c(0, 1) == ExtReal(3.0));
  CHECK(c(2, 0) == ExtReal(-1.5));

  const FunctionFamily partial({fn(pts, {0.0, P, 1.0})});
  const ExtMatrix cp = max_kernel_cG(partial);
  CHECK(cp(0, 0) == ExtReal(0.0));
  CHECK(cp(1, 1) == P);

  CHECK_THROWS_AS(FunctionFamily({}), precondition_error);
  CHECK_THROWS_AS(FunctionFamily({GridFunction(pts, P)}), precondition_error);
  CHECK_THROWS_AS(FunctionFamily({fn(pts, {0.0, N, 0.0})}), tropk::domain_error);
  CHECK_THROWS_AS(FunctionFamily({GridFunction(pts, 0.0), GridFunction(support::integer_line(0, 1), 0.0)}),
                  tropk::domain_error);
}

TEST_CASE("closure examples") {
  const auto pts = support::integer_line(-1, 1);
  const FunctionFamily g({fn(pts, {1.0, 0.0, 1.0}), fn(pts, {-1.0, 0.0, 1.0})});
  const ExtMatrix c = max_kernel_cG(g);
  for (const auto& m : g.members()) CHECK(closure_CG(c, m).values() == m.values());
  for (std::size_t k = 0; k < 3; ++k) {
    const auto section = closure_CG(c, dirac_at(pts, k, DiracKind::bottom));
    for (std::size_t i = 0; i < 3; ++i) CHECK(section[i] == c(i, k));
  }
  CHECK(closure_CG(c, GridFunction(pts, N)).values() == std::vector<ExtReal>{N, N, N});
  CHECK_THROWS_AS(closure_CG(c, GridFunction(support::integer_line(0, 1), 0.0)), tropk::domain_error);
}

TEST_CASE("Lipschitz membership") {
  const auto pts = support::integer_line(-1, 1);
  const FunctionFamily g({fn(pts, {1.0, 0.0, 1.0}), fn(pts, {-1.0, 0.0, 1.0})});
  const ExtMatrix c = max_kernel_cG(g);
  for (const auto& m : g.members()) CHECK(is_lipschitz_member(c, m));
  CHECK_FALSE(is_lipschitz_member(c, fn(pts, {1.0, 5.0, 1.0})));
  // c_G(1, 0) = 1 > 0, so constants are not members of this family's range.
  CHECK_FALSE(is_lipschitz_member(c, GridFunction(pts, 2.0)));

  const FunctionFamily flat({fn(pts, {0.0, 1.0, 2.0}), fn(pts, {2.0, 1.0, 0.0})});
  CHECK(is_lipschitz_member(max_kernel_cG(flat), GridFunction(pts, 2.0)));
}

TEST_CASE("idempotency examples") {
  CHECK(is_idempotent(ExtMatrix::maxplus_identity(4)));
  const ExtMatrix conv{{1, 0, -1}, {0, 0, 0}, {-1, 0, 1}};
  CHECK_FALSE(is_idempotent(conv));
  CHECK(maxplus_product(conv, conv)(0, 0) == ExtReal(2.0));
}

TEST_CASE("c_G reproduces its family, is idempotent and maximal") {
  std::mt19937_64 rng(21);
  const auto pts = support::integer_line(0, 4);
  std::uniform_int_distribution<std::size_t> size(1, 4), cell(0, 4);
  for (int t = 0; t < 200; ++t) {
    const auto fam = random_family(rng, pts, size(rng));
    const ExtMatrix c = max_kernel_cG(fam);
    CHECK(is_idempotent(c, 0.0));
    for (const auto& g : fam.members()) CHECK(closure_CG(c, g).values() == g.values());

    // Kernels that still reproduce the family sit below c_G, whichever way
    // their entries were moved.
    ExtMatrix moved = c;
    std::uniform_int_distribution<int> step(-2, 1);
    for (int k = 0; k < 3; ++k) {
      const std::size_t i = cell(rng), j = cell(rng);
      if (moved(i, j).is_finite()) moved(i, j) = moved(i, j).value() + step(rng);
    }
    bool reproduces = true;
    for (const auto& g : fam.members()) reproduces = reproduces && closure_CG(moved, g).values() == g.values();
    if (reproduces)
      for (std::size_t a = 0; a < 5; ++a)
        for (std::size_t b = 0; b < 5; ++b) CHECK(moved(a, b) <= c(a, b));

    // Any increase of a finite entry breaks reproduction.
    const std::size_t i = cell(rng), j = cell(rng);
    if (c(i, j).is_finite()) {
      ExtMatrix bigger = c;
      bigger(i, j) = c(i, j).value() + 1.0;
      bool still = true;
      for (const auto& g : fam.members()) still = still && closure_CG(bigger, g).values() == g.values();
      CHECK_FALSE(still);
    }
  }
  const auto pts3 = support::integer_line(0, 2);
  const FunctionFamily fam({fn(pts3, {0.0, 1.0, 3.0})});
  const ExtMatrix dirac = ExtMatrix::maxplus_identity(3);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) CHECK(dirac(a, b) <= max_kernel_cG(fam)(a, b));
}

TEST_CASE("C_G is a closure operator and its range is the Lipschitz set") {
  std::mt19937_64 rng(22);
  const auto pts = support::integer_line(0, 4);
  for (int t = 0; t < 200; ++t) {
    const ExtMatrix c = max_kernel_cG(random_family(rng, pts, 3));
    const auto f = support::random_fn(rng, pts, -6, 6, 0.1, 0.1);
    const auto g = pointwise_min(f, support::random_fn(rng, pts, -6, 6, 0.1, 0.1));
    const auto cf = closure_CG(c, f);
    CHECK(support::pointwise_le(f, cf));
    CHECK(closure_CG(c, cf).values() == cf.values());
    CHECK(support::pointwise_le(closure_CG(c, g), cf));
    CHECK(is_lipschitz_member(c, f) == (cf.values() == f.values()));
    CHECK(is_lipschitz_member(c, cf));
  }
}

TEST_CASE("regularity examples") {
  const ExtMatrix conv{{1, 0, -1}, {0, 0, 0}, {-1, 0, 1}};
  CHECK_FALSE(is_von_neumann_regular(conv).regular);

  const auto scalar = is_von_neumann_regular(ExtMatrix{{2.5}});
  CHECK(scalar.regular);
  CHECK(scalar.witness == ExtMatrix{{-2.5}});

  CHECK(is_von_neumann_regular(ExtMatrix::maxplus_identity(3)).regular);
}

TEST_CASE("the residuated candidate is the greatest subinverse") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 200; ++t) {
    const ExtMatrix b = support::to_matrix(oracle::random_symmetric(rng, 3, -2, 2, 0.2));
    const auto r = is_von_neumann_regular(b);
    const ExtMatrix bab = maxplus_product(maxplus_product(b, r.witness), b);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) CHECK(bab(i, j) <= b(i, j));
    CHECK(r.regular == (bab == b));
  }
}

TEST_CASE("idempotent matrices are regular") {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 100; ++t) {
    const ExtMatrix p = random_star(rng, 5);
    REQUIRE(is_idempotent(p, 0.0));
    CHECK(is_von_neumann_regular(p).regular);
  }
}

TEST_CASE("regularity agrees with alphabet search on every 3x3 {0,-1,-inf} matrix") {
  const double alphabet[3] = {0.0, -1.0, -oracle::kInf};
  int mismatches = 0;
  for (int code = 0; code < 19683; ++code) {
    oracle::Mat m(3, std::vector<double>(3));
    int c = code;
    for (std::size_t k = 0; k < 9; ++k, c /= 3) m[k / 3][k % 3] = alphabet[c % 3];
    if (is_von_neumann_regular(support::to_matrix(m)).regular != oracle::vn_regular_3x3(m)) ++mismatches;
  }
  CHECK(mismatches == 0);
}
