#include "tropk/matrix.hpp"

#include <stdexcept>

namespace tropk {

ExtMatrix::ExtMatrix(std::initializer_list<std::initializer_list<ExtReal>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("ExtMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ExtMatrix ExtMatrix::maxplus_identity(std::size_t n) {
  ExtMatrix m(n, n, ExtReal::neg_inf());
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 0.0;
  return m;
}

ExtMatrix ExtMatrix::transpose() const {
  ExtMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool ExtMatrix::is_symmetric(double tol) const {
  if (!square()) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if (!approx_equal((*this)(i, j), (*this)(j, i), tol)) return false;
  return true;
}

bool approx_equal(const ExtMatrix& a, const ExtMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    if (!approx_equal(a.data()[k], b.data()[k], tol)) return false;
  return true;
}

ExtMatrix maxplus_product(const ExtMatrix& a, const ExtMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("maxplus_product: inner dimensions differ");
  ExtMatrix c(a.rows(), b.cols(), ExtReal::neg_inf());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const ExtReal aik = a(i, k);
      if (aik.is_neg_inf()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) = max(c(i, j), lower_add(aik, b(k, j)));
    }
  return c;
}

ExtMatrix left_residual(const ExtMatrix& a, const ExtMatrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("left_residual: row counts differ");
  ExtMatrix x(a.cols(), b.cols(), ExtReal::pos_inf());
  for (std::size_t i = 0; i < a.cols(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      for (std::size_t k = 0; k < a.rows(); ++k) x(i, j) = min(x(i, j), upper_sub(b(k, j), a(k, i)));
  return x;
}

ExtMatrix right_residual(const ExtMatrix& b, const ExtMatrix& a) {
  if (a.cols() != b.cols()) throw std::invalid_argument("right_residual: column counts differ");
  ExtMatrix x(b.rows(), a.rows(), ExtReal::pos_inf());
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t k = 0; k < a.rows(); ++k)
      for (std::size_t j = 0; j < b.cols(); ++j) x(i, k) = min(x(i, k), upper_sub(b(i, j), a(k, j)));
  return x;
}

}  // namespace tropk
