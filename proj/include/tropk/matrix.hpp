#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "tropk/ext_real.hpp"

namespace tropk {

/// Dense row-major matrix of extended reals.
class ExtMatrix {
 public:
  ExtMatrix() = default;
  ExtMatrix(std::size_t rows, std::size_t cols, ExtReal fill = ExtReal::neg_inf())
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  ExtMatrix(std::initializer_list<std::initializer_list<ExtReal>> rows);

  static ExtMatrix maxplus_identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  ExtReal operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  ExtReal& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  const std::vector<ExtReal>& data() const noexcept { return data_; }

  ExtMatrix transpose() const;
  bool is_symmetric(double tol = 0.0) const;

  bool operator==(const ExtMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<ExtReal> data_;
};

bool approx_equal(const ExtMatrix& a, const ExtMatrix& b, double tol);

/// (A (x) B)(i,j) = max_k A(i,k) + B(k,j), with -inf absorbing.
ExtMatrix maxplus_product(const ExtMatrix& a, const ExtMatrix& b);

/// Greatest X with A (x) X <= B:  X(i,j) = min_k B(k,j) - A(k,i)  (upper subtraction).
ExtMatrix left_residual(const ExtMatrix& a, const ExtMatrix& b);

/// Greatest X with X (x) A <= B:  X(i,k) = min_j B(i,j) - A(k,j)  (upper subtraction).
ExtMatrix right_residual(const ExtMatrix& b, const ExtMatrix& a);

}  // namespace tropk
