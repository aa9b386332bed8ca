#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace smoothsc {

using complex = std::complex<double>;

template <class T>
using Vector = std::vector<T>;

inline double conj_of(double x) { return x; }
inline complex conj_of(const complex& x) { return std::conj(x); }
inline double real_of(double x) { return x; }
inline double real_of(const complex& x) { return x.real(); }
inline double abs2(double x) { return x * x; }
inline double abs2(const complex& x) { return std::norm(x); }

/// <x, y> = sum_i x_i conj(y_i)
template <class T>
T dot(const Vector<T>& x, const Vector<T>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot: length mismatch");
  T s{};
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * conj_of(y[i]);
  return s;
}

template <class T>
double norm2(const Vector<T>& x) {
  double s = 0.0;
  for (const auto& v : x) s += abs2(v);
  return std::sqrt(s);
}

/// y += a * x
template <class T>
void axpy(T a, const Vector<T>& x, Vector<T>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

template <class T>
Vector<T> operator-(const Vector<T>& a, const Vector<T>& b) {
  Vector<T> r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

template <class T>
Vector<T> operator+(const Vector<T>& a, const Vector<T>& b) {
  Vector<T> r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by triangular solves and smoothers when a pivot vanishes.
class ZeroPivotError : public std::runtime_error {
 public:
  ZeroPivotError(std::size_t index, const std::string& what) : std::runtime_error(what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// Compressed sparse row matrix. Column indices are strictly increasing
/// within each row and no explicit zeros are stored.
template <class T>
class CsrMatrix {
 public:
  CsrMatrix() : offsets_(1, 0) {}
  CsrMatrix(std::size_t nrows, std::size_t ncols, std::vector<std::size_t> offsets, std::vector<int> cols,
            std::vector<T> vals)
      : nrows_(nrows), ncols_(ncols), offsets_(std::move(offsets)), cols_(std::move(cols)), vals_(std::move(vals)) {
    if (offsets_.size() != nrows_ + 1 || cols_.size() != vals_.size() || offsets_.back() != cols_.size())
      throw DimensionError("CsrMatrix: inconsistent arrays");
  }

  static CsrMatrix identity(std::size_t n) {
    std::vector<std::size_t> off(n + 1);
    std::vector<int> cols(n);
    for (std::size_t i = 0; i <= n; ++i) off[i] = i;
    for (std::size_t i = 0; i < n; ++i) cols[i] = static_cast<int>(i);
    return CsrMatrix(n, n, std::move(off), std::move(cols), std::vector<T>(n, T(1)));
  }

  std::size_t rows() const { return nrows_; }
  std::size_t cols() const { return ncols_; }
  std::size_t nnz() const { return vals_.size(); }
  const std::vector<std::size_t>& offsets() const { return offsets_; }
  const std::vector<int>& col_indices() const { return cols_; }
  const std::vector<T>& values() const { return vals_; }
  std::vector<T>& values() { return vals_; }

  std::size_t row_begin(std::size_t i) const { return offsets_[i]; }
  std::size_t row_end(std::size_t i) const { return offsets_[i + 1]; }
  int col(std::size_t k) const { return cols_[k]; }
  const T& val(std::size_t k) const { return vals_[k]; }

  /// Entry (i, j), zero if not stored.
  T operator()(std::size_t i, std::size_t j) const {
    auto b = cols_.begin() + offsets_[i], e = cols_.begin() + offsets_[i + 1];
    auto it = std::lower_bound(b, e, static_cast<int>(j));
    return (it != e && *it == static_cast<int>(j)) ? vals_[it - cols_.begin()] : T{};
  }

  void multiply(const Vector<T>& x, Vector<T>& y) const {
    if (x.size() != ncols_) throw DimensionError("spmv: vector length does not match matrix columns");
    y.assign(nrows_, T{});
    for (std::size_t i = 0; i < nrows_; ++i) {
      T s{};
      for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) s += vals_[k] * x[cols_[k]];
      y[i] = s;
    }
  }

  Vector<T> operator*(const Vector<T>& x) const {
    Vector<T> y;
    multiply(x, y);
    return y;
  }

  /// y = A^T x (no conjugation).
  Vector<T> transpose_multiply(const Vector<T>& x) const {
    if (x.size() != nrows_) throw DimensionError("spmv^T: vector length does not match matrix rows");
    Vector<T> y(ncols_, T{});
    for (std::size_t i = 0; i < nrows_; ++i)
      for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) y[cols_[k]] += vals_[k] * x[i];
    return y;
  }

  Vector<T> diagonal() const {
    Vector<T> d(std::min(nrows_, ncols_), T{});
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = (*this)(i, i);
    return d;
  }

  CsrMatrix transpose() const {
    std::vector<std::size_t> off(ncols_ + 1, 0);
    for (int c : cols_) ++off[c + 1];
    for (std::size_t j = 0; j < ncols_; ++j) off[j + 1] += off[j];
    std::vector<int> cols(nnz());
    std::vector<T> vals(nnz());
    std::vector<std::size_t> pos(off.begin(), off.end() - 1);
    for (std::size_t i = 0; i < nrows_; ++i)
      for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
        const std::size_t p = pos[cols_[k]]++;
        cols[p] = static_cast<int>(i);
        vals[p] = vals_[k];
      }
    return CsrMatrix(ncols_, nrows_, std::move(off), std::move(cols), std::move(vals));
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : vals_) m = std::max(m, std::abs(v));
    return m;
  }

  Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> to_dense() const {
    Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> D =
        Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>::Zero(nrows_, ncols_);
    for (std::size_t i = 0; i < nrows_; ++i)
      for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) D(i, cols_[k]) = vals_[k];
    return D;
  }

  static CsrMatrix from_dense(const Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>& D) {
    std::vector<std::size_t> off(D.rows() + 1, 0);
    std::vector<int> cols;
    std::vector<T> vals;
    for (Eigen::Index i = 0; i < D.rows(); ++i) {
      for (Eigen::Index j = 0; j < D.cols(); ++j)
        if (D(i, j) != T{}) {
          cols.push_back(static_cast<int>(j));
          vals.push_back(D(i, j));
        }
      off[i + 1] = cols.size();
    }
    return CsrMatrix(D.rows(), D.cols(), std::move(off), std::move(cols), std::move(vals));
  }

 private:
  std::size_t nrows_ = 0;
  std::size_t ncols_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<int> cols_;
  std::vector<T> vals_;
};

/// Accumulates (i, j, v) contributions and compresses them deterministically:
/// duplicates are summed in insertion order and exact zeros are dropped.
template <class T>
class TripletBuilder {
 public:
  TripletBuilder(std::size_t nrows, std::size_t ncols) : nrows_(nrows), ncols_(ncols) {}
  void reserve(std::size_t n) {
    rows_.reserve(n);
    cols_.reserve(n);
    vals_.reserve(n);
  }
  void add(int i, int j, T v) {
    rows_.push_back(i);
    cols_.push_back(j);
    vals_.push_back(v);
  }
  std::size_t size() const { return vals_.size(); }

  CsrMatrix<T> build() const {
    const std::size_t n = vals_.size();
    std::vector<std::size_t> count(nrows_ + 1, 0);
    for (std::size_t k = 0; k < n; ++k) {
      if (rows_[k] < 0 || static_cast<std::size_t>(rows_[k]) >= nrows_ || cols_[k] < 0 ||
          static_cast<std::size_t>(cols_[k]) >= ncols_)
        throw DimensionError("TripletBuilder: index out of range");
      ++count[rows_[k] + 1];
    }
    for (std::size_t i = 0; i < nrows_; ++i) count[i + 1] += count[i];
    std::vector<std::size_t> order(n);
    {
      std::vector<std::size_t> pos(count.begin(), count.end() - 1);
      for (std::size_t k = 0; k < n; ++k) order[pos[rows_[k]]++] = k;
    }
    std::vector<std::size_t> off(nrows_ + 1, 0);
    std::vector<int> cols;
    std::vector<T> vals;
    cols.reserve(n / 2);
    vals.reserve(n / 2);
    for (std::size_t i = 0; i < nrows_; ++i) {
      auto b = order.begin() + count[i], e = order.begin() + count[i + 1];
      std::stable_sort(b, e, [&](std::size_t a, std::size_t c) { return cols_[a] < cols_[c]; });
      for (auto it = b; it != e;) {
        const int c = cols_[*it];
        T s{};
        for (; it != e && cols_[*it] == c; ++it) s += vals_[*it];
        if (s != T{}) {
          cols.push_back(c);
          vals.push_back(s);
        }
      }
      off[i + 1] = cols.size();
    }
    return CsrMatrix<T>(nrows_, ncols_, std::move(off), std::move(cols), std::move(vals));
  }

 private:
  std::size_t nrows_, ncols_;
  std::vector<int> rows_, cols_;
  std::vector<T> vals_;
};

/// (A + A^T) / 2 for square A; keeps complex-symmetric matrices complex-symmetric.
template <class T>
CsrMatrix<T> symmetrize(const CsrMatrix<T>& A) {
  if (A.rows() != A.cols()) throw DimensionError("symmetrize: matrix is not square");
  TripletBuilder<T> b(A.rows(), A.cols());
  b.reserve(2 * A.nnz());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t k = A.row_begin(i); k < A.row_end(i); ++k) {
      b.add(static_cast<int>(i), A.col(k), A.val(k) * 0.5);
      b.add(A.col(k), static_cast<int>(i), A.val(k) * 0.5);
    }
  return b.build();
}

/// C = A * B
template <class T>
CsrMatrix<T> multiply(const CsrMatrix<T>& A, const CsrMatrix<T>& B) {
  if (A.cols() != B.rows()) throw DimensionError("multiply: inner dimensions differ");
  TripletBuilder<T> b(A.rows(), B.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t k = A.row_begin(i); k < A.row_end(i); ++k)
      for (std::size_t l = B.row_begin(A.col(k)); l < B.row_end(A.col(k)); ++l)
        b.add(static_cast<int>(i), B.col(l), A.val(k) * B.val(l));
  return b.build();
}

template <class T>
CsrMatrix<complex> to_complex(const CsrMatrix<T>& A) {
  std::vector<complex> v(A.values().begin(), A.values().end());
  return CsrMatrix<complex>(A.rows(), A.cols(), A.offsets(), A.col_indices(), std::move(v));
}

enum class TriPart { lower_incl_diag, upper_incl_diag };

/// Forward or backward substitution using only the stated triangle of A.
template <class T>
Vector<T> tri_solve(const CsrMatrix<T>& A, TriPart part, const Vector<T>& b) {
  const std::size_t n = A.rows();
  if (A.cols() != n || b.size() != n) throw DimensionError("tri_solve: dimension mismatch");
  Vector<T> x(n);
  auto row = [&](std::size_t i) {
    T s = b[i];
    T d{};
    for (std::size_t k = A.row_begin(i); k < A.row_end(i); ++k) {
      const std::size_t j = A.col(k);
      if (j == i)
        d = A.val(k);
      else if ((part == TriPart::lower_incl_diag && j < i) || (part == TriPart::upper_incl_diag && j > i))
        s -= A.val(k) * x[j];
    }
    if (d == T{}) throw ZeroPivotError(i, "tri_solve: zero diagonal entry at row " + std::to_string(i));
    x[i] = s / d;
  };
  if (part == TriPart::lower_incl_diag)
    for (std::size_t i = 0; i < n; ++i) row(i);
  else
    for (std::size_t i = n; i-- > 0;) row(i);
  return x;
}

}  // namespace smoothsc
