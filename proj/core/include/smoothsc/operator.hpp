#pragma once

#include <functional>

#include "smoothsc/csr.hpp"

namespace smoothsc {

/// Linear map on coefficient vectors; smoothers and preconditioners
/// implement it.
template <class T>
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual std::size_t size() const = 0;
  /// y = Op x
  virtual void apply(const Vector<T>& x, Vector<T>& y) const = 0;
  Vector<T> operator()(const Vector<T>& x) const {
    Vector<T> y;
    apply(x, y);
    return y;
  }
};

template <class T>
class IdentityOperator final : public LinearOperator<T> {
 public:
  explicit IdentityOperator(std::size_t n) : n_(n) {}
  std::size_t size() const override { return n_; }
  void apply(const Vector<T>& x, Vector<T>& y) const override { y = x; }

 private:
  std::size_t n_;
};

template <class T>
class MatrixOperator final : public LinearOperator<T> {
 public:
  explicit MatrixOperator(const CsrMatrix<T>& A) : A_(A) {}
  std::size_t size() const override { return A_.rows(); }
  void apply(const Vector<T>& x, Vector<T>& y) const override { A_.multiply(x, y); }

 private:
  const CsrMatrix<T>& A_;
};

template <class T>
class FunctionOperator final : public LinearOperator<T> {
 public:
  using Fn = std::function<void(const Vector<T>&, Vector<T>&)>;
  FunctionOperator(std::size_t n, Fn fn) : n_(n), fn_(std::move(fn)) {}
  std::size_t size() const override { return n_; }
  void apply(const Vector<T>& x, Vector<T>& y) const override { fn_(x, y); }

 private:
  std::size_t n_;
  Fn fn_;
};

/// y = omega * D^{-1} x
template <class T>
class JacobiOperator final : public LinearOperator<T> {
 public:
  explicit JacobiOperator(const CsrMatrix<T>& A, double omega = 1.0) : inv_(A.rows()) {
    const Vector<T> d = A.diagonal();
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d[i] == T{}) throw ZeroPivotError(i, "Jacobi: zero diagonal entry at row " + std::to_string(i));
      inv_[i] = T(omega) / d[i];
    }
  }
  std::size_t size() const override { return inv_.size(); }
  void apply(const Vector<T>& x, Vector<T>& y) const override {
    y.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = inv_[i] * x[i];
  }

 private:
  Vector<T> inv_;
};

}  // namespace smoothsc
