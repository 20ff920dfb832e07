#ifndef CROSM_LINALG_HPP
#define CROSM_LINALG_HPP

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "crosm/scalar.hpp"

namespace crosm {

template <typename T>
using Vec = std::vector<T>;

/// Dense row-major matrix over an exact or floating scalar. Dimensions in
/// this library stay tiny (at most a few dozen), so everything is direct
/// Gaussian elimination with the deterministic lowest-index pivot rule.
template <typename T>
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  Vec<T> row(std::size_t i) const {
    return Vec<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }
  Vec<T> col(std::size_t j) const {
    Vec<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  void set_col(std::size_t j, const Vec<T>& c) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = c[i];
  }

  bool operator==(const Mat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

// ---------------------------------------------------------------------------
// Vector arithmetic
// ---------------------------------------------------------------------------

template <typename T>
Vec<T> zero_vec(std::size_t n) {
  return Vec<T>(n, T(0));
}

template <typename T>
Vec<T> unit_vec(std::size_t n, std::size_t i) {
  Vec<T> v(n, T(0));
  v[i] = T(1);
  return v;
}

template <typename T>
void axpy(Vec<T>& y, const T& a, const Vec<T>& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

template <typename T>
Vec<T> add(const Vec<T>& a, const Vec<T>& b) {
  Vec<T> r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

template <typename T>
Vec<T> sub(const Vec<T>& a, const Vec<T>& b) {
  Vec<T> r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

template <typename T>
Vec<T> scale(const T& a, const Vec<T>& x) {
  Vec<T> r(x);
  for (auto& v : r) v *= a;
  return r;
}

template <typename T>
T dot(const Vec<T>& a, const Vec<T>& b) {
  T s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Bilinear form value  aᵀ G b.
template <typename T>
T dot(const Vec<T>& a, const Mat<T>& G, const Vec<T>& b) {
  T s(0);
  for (std::size_t i = 0; i < G.rows(); ++i) {
    if (a[i] == T(0)) continue;
    T row(0);
    for (std::size_t j = 0; j < G.cols(); ++j) row += G(i, j) * b[j];
    s += a[i] * row;
  }
  return s;
}

template <typename T>
bool is_zero_vec(const Vec<T>& v) {
  for (const auto& x : v)
    if (x != T(0)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Matrix arithmetic
// ---------------------------------------------------------------------------

template <typename T>
Mat<T> operator+(const Mat<T>& a, const Mat<T>& b) {
  Mat<T> r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}

template <typename T>
Mat<T> operator-(const Mat<T>& a, const Mat<T>& b) {
  Mat<T> r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}

template <typename T>
Mat<T> operator*(const Mat<T>& a, const Mat<T>& b) {
  Mat<T> r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T& aik = a(i, k);
      if (aik == T(0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

template <typename T>
Vec<T> operator*(const Mat<T>& a, const Vec<T>& x) {
  Vec<T> r(a.rows(), T(0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r[i] += a(i, j) * x[j];
  return r;
}

template <typename T>
Mat<T> operator*(const T& c, const Mat<T>& a) {
  Mat<T> r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = c * a(i, j);
  return r;
}

template <typename T>
Mat<T> transpose(const Mat<T>& a) {
  Mat<T> r(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = a(i, j);
  return r;
}

/// Matrix whose columns are the given vectors.
template <typename T>
Mat<T> from_columns(const std::vector<Vec<T>>& cols, std::size_t rows) {
  Mat<T> m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) m.set_col(j, cols[j]);
  return m;
}

template <typename T>
T max_abs(const Mat<T>& a) {
  T m(0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      m = std::max(m, abs_value(a(i, j)));
  return m;
}

// ---------------------------------------------------------------------------
// Elimination. Pivot selection is always "first usable row, top to bottom",
// so exact results (kernels, inverses, ranks) are reproducible bit for bit.
// ---------------------------------------------------------------------------

/// Reduced row echelon form in place; returns the pivot columns.
template <typename T>
std::vector<std::size_t> rref(Mat<T>& a) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && !usable_pivot(a(p, c))) ++p;
    if (p == a.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(r, j));
    const T inv = T(1) / a(r, c);
    for (std::size_t j = 0; j < a.cols(); ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || a(i, c) == T(0)) continue;
      const T f = a(i, c);
      for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <typename T>
std::size_t rank(Mat<T> a) {
  return rref(a).size();
}

/// Basis of the null space {x : Ax = 0}. Free columns are enumerated in
/// increasing index order and each basis vector sets its free variable to 1.
template <typename T>
std::vector<Vec<T>> kernel_basis(Mat<T> a) {
  const std::size_t n = a.cols();
  const std::vector<std::size_t> pivots = rref(a);
  std::vector<bool> is_pivot(n, false);
  for (auto c : pivots) is_pivot[c] = true;

  std::vector<Vec<T>> basis;
  for (std::size_t fc = 0; fc < n; ++fc) {
    if (is_pivot[fc]) continue;
    Vec<T> v(n, T(0));
    v[fc] = T(1);
    for (std::size_t pr = 0; pr < pivots.size(); ++pr)
      v[pivots[pr]] = -a(pr, fc);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Solves Ax = b for square invertible A; nullopt if A is singular or the
/// system is inconsistent.
template <typename T>
std::optional<Vec<T>> solve(Mat<T> a, Vec<T> b) {
  const std::size_t n = a.cols();
  Mat<T> aug(a.rows(), n + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n) = b[i];
  }
  const auto pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == n) return std::nullopt;  // 0 = 1
  if (pivots.size() < n) return std::nullopt;  // underdetermined
  Vec<T> x(n, T(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(r, n);
  return x;
}

template <typename T>
Mat<T> inverse(const Mat<T>& a) {
  const std::size_t n = a.rows();
  Mat<T> aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = T(1);
  }
  const auto pivots = rref(aug);
  if (pivots.size() < n || pivots.back() >= n)
    throw input_error("inverse of a singular matrix");
  Mat<T> inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

template <typename T>
T determinant(Mat<T> a) {
  const std::size_t n = a.rows();
  T det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && !usable_pivot(a(p, c))) ++p;
    if (p == n) return T(0);
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
      det = -det;
    }
    det *= a(c, c);
    const T inv = T(1) / a(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a(i, c) == T(0)) continue;
      const T f = a(i, c) * inv;
      for (std::size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  return det;
}

/// Index of the first non-positive leading principal minor, or 0 if the
/// symmetric matrix is positive definite. (Exact-mode SPD test.)
template <typename T>
std::size_t first_nonpositive_minor(const Mat<T>& a) {
  const std::size_t n = a.rows();
  for (std::size_t k = 1; k <= n; ++k) {
    Mat<T> lead(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) lead(i, j) = a(i, j);
    if (!(determinant(lead) > T(0))) return k;
  }
  return 0;
}

/// Float-mode SPD test: Cholesky with pivot tolerance 1e-12. Returns the
/// failing pivot index (1-based) or 0 on success.
inline std::size_t cholesky_failure(const Mat<double>& a) {
  const std::size_t n = a.rows();
  Mat<double> l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d <= 1e-12) return j + 1;
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return 0;
}

template <typename T>
std::size_t spd_failure(const Mat<T>& a) {
  if constexpr (scalar_traits<T>::exact) {
    return first_nonpositive_minor(a);
  } else {
    return cholesky_failure(a);
  }
}

/// True if v lies in the span of the given vectors.
template <typename T>
bool in_span(const std::vector<Vec<T>>& basis, const Vec<T>& v,
             std::size_t ambient_dim) {
  Mat<T> b = from_columns(basis, ambient_dim);
  std::vector<Vec<T>> with = basis;
  with.push_back(v);
  Mat<T> bw = from_columns(with, ambient_dim);
  return rank(std::move(b)) == rank(std::move(bw));
}

}  // namespace crosm

#endif
