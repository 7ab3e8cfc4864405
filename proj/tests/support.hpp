#pragma once

#include <random>
#include <vector>

#include "oracles.hpp"
#include "tropk/grid.hpp"
#include "tropk/matrix.hpp"

namespace support {

inline tropk::ExtMatrix to_matrix(const oracle::Mat& m) {
  tropk::ExtMatrix out(m.size(), m.empty() ? 0 : m[0].size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) out(i, j) = m[i][j];
  return out;
}

inline oracle::Mat to_plain(const tropk::ExtMatrix& m) {
  oracle::Mat out(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j).value();
  return out;
}

inline tropk::PointSetPtr line(std::vector<double> xs) { return tropk::make_points(tropk::PointSet::from_scalars(xs)); }

inline tropk::PointSetPtr integer_line(int lo, int hi) {
  std::vector<double> xs;
  for (int x = lo; x <= hi; ++x) xs.push_back(x);
  return line(xs);
}

inline tropk::GridFunction fn(const tropk::PointSetPtr& d, std::vector<tropk::ExtReal> v) {
  return tropk::GridFunction(d, std::move(v));
}

/// Integer values in [lo, hi], +inf with probability p_top.
inline tropk::GridFunction random_fn(std::mt19937_64& rng, const tropk::PointSetPtr& d, int lo, int hi,
                                     double p_top = 0.0, double p_bottom = 0.0) {
  std::uniform_int_distribution<int> val(lo, hi);
  std::bernoulli_distribution top(p_top), bottom(p_bottom);
  std::vector<tropk::ExtReal> v(d->size());
  for (auto& x : v) x = top(rng) ? tropk::ExtReal::pos_inf() : bottom(rng) ? tropk::ExtReal::neg_inf() : tropk::ExtReal(val(rng));
  return tropk::GridFunction(d, std::move(v));
}

inline bool exactly_equal(const tropk::GridFunction& a, const tropk::GridFunction& b) { return a.values() == b.values(); }

inline bool pointwise_le(const tropk::GridFunction& a, const tropk::GridFunction& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i] <= b[i])) return false;
  return true;
}

}  // namespace support
