#pragma once

// Dense row-major square/rectangular matrices over any ring-like scalar
// (Integer, Rational, ExactScalar, Polynomial).

#include <cstddef>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace gplab {

template <typename T>
T ring_zero() {
  if constexpr (std::is_constructible_v<T, int>) return T(0);
  else return T();
}

template <typename T>
T ring_one() {
  if constexpr (std::is_constructible_v<T, int>) return T(1);
  else return T::one();
}

template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, ring_zero<T>()) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = ring_one<T>();
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    a.require_same_shape(b);
    Matrix r = a;
    for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] = a.data_[i] + b.data_[i];
    return r;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    a.require_same_shape(b);
    Matrix r = a;
    for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] = a.data_[i] - b.data_[i];
    return r;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shape mismatch in product");
    Matrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik == ring_zero<T>()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          if (b(k, j) == ring_zero<T>()) continue;
          r(i, j) = r(i, j) + aik * b(k, j);
        }
      }
    }
    return r;
  }
  friend Matrix operator*(const T& s, const Matrix& a) {
    Matrix r = a;
    for (auto& v : r.data_) v = s * v;
    return r;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  template <typename F>
  auto map(F f) const -> Matrix<decltype(f(std::declval<const T&>()))> {
    Matrix<decltype(f(std::declval<const T&>()))> r(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(i, j) = f((*this)(i, j));
    return r;
  }

  bool is_lower_triangular() const {
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if (!((*this)(i, j) == ring_zero<T>())) return false;
    return true;
  }

 private:
  void require_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <typename T, typename V>
std::vector<V> apply(const Matrix<T>& m, const std::vector<V>& v) {
  if (m.cols() != v.size()) throw std::invalid_argument("matrix-vector shape mismatch");
  std::vector<V> out(m.rows(), ring_zero<V>());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!(m(i, j) == ring_zero<T>())) out[i] = out[i] + V(m(i, j)) * v[j];
  return out;
}

}  // namespace gplab
