#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "support.hpp"
#include "tropk/errors.hpp"
#include "tropk/ext_real.hpp"
#include "tropk/grid.hpp"
#include "tropk/matrix.hpp"

using namespace tropk;

namespace {
const ExtReal P = ExtReal::pos_inf();
const ExtReal N = ExtReal::neg_inf();
}  // namespace

TEST_CASE("upper addition lets +inf absorb") {
  CHECK(upper_add(P, N) == P);
  CHECK(upper_add(2.0, 3.0) == ExtReal(5.0));
  CHECK(upper_add(N, N) == N);
  CHECK(upper_sub(P, P) == P);
}

TEST_CASE("lower addition lets -inf absorb") {
  CHECK(lower_add(P, N) == N);
  CHECK(lower_add(-1.5, 0.0) == ExtReal(-1.5));
  CHECK(lower_add(P, P) == P);
  CHECK(lower_sub(P, P) == N);
}

TEST_CASE("NaN is rejected at construction") { CHECK_THROWS_AS(ExtReal(std::nan("")), std::domain_error); }

TEST_CASE("total order places infinities at the ends") {
  CHECK(N < ExtReal(-1e300));
  CHECK(ExtReal(1e300) < P);
  CHECK(max(N, ExtReal(0.0)) == ExtReal(0.0));
  CHECK(min(P, ExtReal(0.0)) == ExtReal(0.0));
}

TEST_CASE("additions: commutativity, associativity, De Morgan duality") {
  const std::vector<ExtReal> vals{N, ExtReal(-2.0), ExtReal(0.0), ExtReal(3.0), P};
  for (auto a : vals)
    for (auto b : vals) {
      CHECK(upper_add(a, b) == upper_add(b, a));
      CHECK(lower_add(a, b) == lower_add(b, a));
      CHECK(negate(upper_add(a, b)) == lower_add(negate(a), negate(b)));
      const bool mixed = (a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf());
      if (!mixed) CHECK(upper_add(a, b) == lower_add(a, b));
      CHECK((upper_add(a, N) == N) == !a.is_pos_inf());
      for (auto c : vals) {
        CHECK(upper_add(upper_add(a, b), c) == upper_add(a, upper_add(b, c)));
        CHECK(lower_add(lower_add(a, b), c) == lower_add(a, lower_add(b, c)));
      }
    }
}

TEST_CASE("halving keeps infinities") {
  CHECK(half(P) == P);
  CHECK(half(N) == N);
  CHECK(half(3.0) == ExtReal(1.5));
}

TEST_CASE("dirac functions") {
  const auto d3 = support::line({0, 1, 2});
  CHECK(dirac(d3, std::vector<double>{1}, DiracKind::bottom).values() == std::vector<ExtReal>{N, 0.0, N});
  const auto d2 = support::line({0, 1});
  CHECK(dirac(d2, std::vector<double>{0}, DiracKind::top).values() == std::vector<ExtReal>{0.0, P});
  const auto d1 = support::line({7});
  CHECK(dirac(d1, std::vector<double>{7}, DiracKind::top).values() == std::vector<ExtReal>{0.0});
  CHECK(dirac(d1, std::vector<double>{7}, DiracKind::bottom).values() == std::vector<ExtReal>{0.0});
  CHECK_THROWS_AS(dirac(d3, std::vector<double>{5}, DiracKind::top), tropk::domain_error);
}

TEST_CASE("point sets reject duplicates and keep order") {
  CHECK_THROWS_AS(PointSet::from_scalars(std::vector<double>{0, 1, 0}), tropk::domain_error);
  const auto p = PointSet::from_scalars(std::vector<double>{2, -1, 5});
  CHECK(p.index_of(std::vector<double>{-1}) == 1);
  CHECK(PointSet::uniform_1d(-1, 1, 0.5).size() == 5);
}

TEST_CASE("grid functions require matching domains") {
  const auto a = support::line({0, 1});
  const auto b = support::line({0, 2});
  CHECK_THROWS_AS(pointwise_min(GridFunction(a, 0.0), GridFunction(b, 0.0)), tropk::domain_error);
  CHECK_THROWS_AS(GridFunction(a, std::vector<ExtReal>{0.0}), tropk::domain_error);
}

TEST_CASE("residuals are the greatest solutions of one-sided inequalities") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = support::to_matrix(oracle::random_symmetric(rng, 3, -2, 2, 0.2));
    const auto b = support::to_matrix(oracle::random_symmetric(rng, 3, -2, 2, 0.2));
    const ExtMatrix x = left_residual(a, b);
    const ExtMatrix ax = maxplus_product(a, x);
    for (std::size_t k = 0; k < 9; ++k) CHECK(ax.data()[k] <= b.data()[k]);
    const ExtMatrix y = right_residual(b, a);
    const ExtMatrix ya = maxplus_product(y, a);
    for (std::size_t k = 0; k < 9; ++k) CHECK(ya.data()[k] <= b.data()[k]);
    // Any entrywise increase of x breaks A x <= B unless x was already +inf.
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        if (x(i, j).is_pos_inf()) continue;
        ExtMatrix bumped = x;
        bumped(i, j) = x(i, j).is_neg_inf() ? ExtReal(-1e6) : ExtReal(x(i, j).value() + 1.0);
        const ExtMatrix ab = maxplus_product(a, bumped);
        bool still_below = true;
        for (std::size_t k = 0; k < 9; ++k) still_below = still_below && ab.data()[k] <= b.data()[k];
        // -inf entries of x are maximal only when every finite bump fails.
        if (!x(i, j).is_neg_inf()) CHECK_FALSE(still_below);
      }
  }
}

TEST_CASE("max-plus identity is neutral") {
  const ExtMatrix m{{1.0, N}, {0.0, -2.0}};
  CHECK(maxplus_product(ExtMatrix::maxplus_identity(2), m) == m);
  CHECK(maxplus_product(m, ExtMatrix::maxplus_identity(2)) == m);
}
