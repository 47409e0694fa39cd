#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "kisram/series.hpp"

namespace kisram {

/// Dense row-major matrix over a ring type T whose value-initialized element is zero.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Matrix transpose() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw std::out_of_range("matrix block out of range");
    Matrix out(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
    return out;
  }

  void set_block(std::size_t r0, std::size_t c0, const Matrix& m) {
    if (r0 + m.rows() > rows_ || c0 + m.cols() > cols_) throw std::out_of_range("matrix block out of range");
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) (*this)(r0 + i, c0 + j) = m(i, j);
  }

  template <class F>
  auto map(F&& f) const {
    Matrix<decltype(f(std::declval<const T&>()))> out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(i, j) = f((*this)(i, j));
    return out;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    a.check_same_shape(b);
    Matrix out(a.rows_, a.cols_);
    for (std::size_t k = 0; k < a.data_.size(); ++k) out.data_[k] = a.data_[k] + b.data_[k];
    return out;
  }

  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    a.check_same_shape(b);
    Matrix out(a.rows_, a.cols_);
    for (std::size_t k = 0; k < a.data_.size(); ++k) out.data_[k] = a.data_[k] - b.data_[k];
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shapes do not compose");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) {
        T acc{};
        for (std::size_t k = 0; k < a.cols_; ++k) acc = acc + a(i, k) * b(k, j);
        out(i, j) = acc;
      }
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  void check_same_shape(const Matrix& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_) throw std::invalid_argument("matrix shapes differ");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using SeriesMatrix = Matrix<PuiseuxSeries>;

SeriesMatrix identity_matrix(std::size_t n, const FieldPtr& field);
/// Product with every entry truncated at cap.
SeriesMatrix mul_truncated(const SeriesMatrix& a, const SeriesMatrix& b, const ExtRational& cap);
/// Cofactor expansion; exact up to the propagated precision. Square, size >= 1.
PuiseuxSeries determinant(const SeriesMatrix& m);
/// adj(M) with M * adj(M) = adj(M) * M = det(M) * I.
SeriesMatrix adjugate(const SeriesMatrix& m);
SeriesMatrix frobenius(const SeriesMatrix& m);
SeriesMatrix shifted(const SeriesMatrix& m, const Rational& delta);
SeriesMatrix truncated(const SeriesMatrix& m, const ExtRational& cap);
SeriesMatrix embedded(const SeriesMatrix& m, const FieldPtr& field);
/// Smallest certified lower bound of the entry valuations.
ExtRational valuation_bound(const SeriesMatrix& m);
/// Smallest entry precision.
ExtRational precision(const SeriesMatrix& m);
bool agrees_with(const SeriesMatrix& a, const SeriesMatrix& b, const ExtRational& upto);
/// Largest field among the entries.
FieldPtr common_field(const SeriesMatrix& m);
/// `[[a, b], [c, d]]`.
std::string format(const SeriesMatrix& m);

}  // namespace kisram
