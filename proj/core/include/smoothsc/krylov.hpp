#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "smoothsc/csr.hpp"
#include "smoothsc/operator.hpp"

namespace smoothsc {

/// Thrown when a Krylov recurrence meets a non-positive curvature or an
/// otherwise unusable pivot.
class BreakdownError : public std::runtime_error {
 public:
  BreakdownError(int iteration, const std::string& what) : std::runtime_error(what), iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(int iterations, double residual, const std::string& what)
      : std::runtime_error(what), iterations_(iterations), residual_(residual) {}
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

/// Per-iteration history, entry k belongs to iterate x_k (k = 0..m).
template <class T>
struct KrylovTrace {
  std::vector<double> energy_error;     // ||x* - x_k||_A, when a reference is given
  std::vector<double> precond_residual;  // <r, S r>^{1/2} (PCG) or ||M r||_2 (GMRES)
  std::vector<Vector<T>> snapshots;      // iterates, when requested
  bool underflow = false;                // PCG stopped because <r, z> underflowed
  int iterations = 0;
};

template <class T>
struct KrylovOptions {
  const Vector<T>* reference = nullptr;
  bool keep_snapshots = false;
};

template <class T>
struct KrylovResult {
  Vector<T> x;
  KrylovTrace<T> trace;
};

/// ||e||_A = <Ae, e>^{1/2} (real part for complex A).
template <class T>
double energy_norm(const CsrMatrix<T>& A, const Vector<T>& e) {
  return std::sqrt(std::max(0.0, real_of(dot(A * e, e))));
}

namespace detail {

template <class T>
void record(const CsrMatrix<T>& A, const Vector<T>& x, double prec_res, const KrylovOptions<T>& opt,
            KrylovTrace<T>& tr) {
  if (opt.reference) tr.energy_error.push_back(energy_norm(A, *opt.reference - x));
  tr.precond_residual.push_back(prec_res);
  if (opt.keep_snapshots) tr.snapshots.push_back(x);
}

}  // namespace detail

/// m steps of preconditioned conjugate gradients from x0 with the
/// recurrences alpha = <r,z>/<Ap,p>, beta = <r_k,z_k>/<r_{k-1},z_{k-1}>.
template <class T>
KrylovResult<T> pcg(const CsrMatrix<T>& A, const Vector<T>& b, const LinearOperator<T>& S, const Vector<T>& x0,
                    int m, const KrylovOptions<T>& opt = {}) {
  const std::size_t n = A.rows();
  if (b.size() != n || x0.size() != n || S.size() != n) throw DimensionError("pcg: dimension mismatch");
  if (m < 0) throw std::invalid_argument("pcg: negative step count");
  KrylovResult<T> res{x0, {}};
  Vector<T>& x = res.x;
  Vector<T> r = b - A * x;
  Vector<T> z = S(r);
  Vector<T> p = z;
  Vector<T> Ap;
  T rz = dot(r, z);
  detail::record(A, x, std::sqrt(std::abs(real_of(rz))), opt, res.trace);
  for (int k = 1; k <= m; ++k) {
    if (std::abs(rz) < 1e-30) {
      res.trace.underflow = true;
      for (; k <= m; ++k) detail::record(A, x, std::sqrt(std::abs(real_of(rz))), opt, res.trace);
      break;
    }
    A.multiply(p, Ap);
    const T pAp = dot(Ap, p);
    if (!(real_of(pAp) > 0.0))
      throw BreakdownError(k, "pcg: non-positive curvature <Ap,p> at iteration " + std::to_string(k));
    const T alpha = rz / pAp;
    axpy(alpha, p, x);
    axpy(-alpha, Ap, r);
    S.apply(r, z);
    const T rz_new = dot(r, z);
    const T beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    res.trace.iterations = k;
    detail::record(A, x, std::sqrt(std::abs(real_of(rz))), opt, res.trace);
  }
  return res;
}

/// Rounding-error level of the residual b - Ax: 64 eps (||A||_inf ||x||_2 + ||b||_2).
/// Iterative solves accept a residual at this level when rtol ||b|| is
/// below what double precision can certify.
template <class T>
double residual_floor(const CsrMatrix<T>& A, const Vector<T>& x, double bnorm) {
  double anorm = 0.0;
  for (std::size_t i = 0; i < A.rows(); ++i) {
    double s = 0.0;
    for (std::size_t k = A.row_begin(i); k < A.row_end(i); ++k) s += std::abs(A.val(k));
    anorm = std::max(anorm, s);
  }
  return 64.0 * std::numeric_limits<double>::epsilon() * (anorm * norm2(x) + bnorm);
}

/// PCG until ||b - Ax||_2 <= max(rtol ||b||_2, residual_floor).
template <class T>
Vector<T> pcg_solve(const CsrMatrix<T>& A, const Vector<T>& b, const LinearOperator<T>& M, Vector<T> x, double rtol,
                    int max_iter, int* iterations = nullptr) {
  const std::size_t n = A.rows();
  if (b.size() != n || x.size() != n) throw DimensionError("pcg_solve: dimension mismatch");
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), T{});
    if (iterations) *iterations = 0;
    return x;
  }
  Vector<T> r = b - A * x;
  Vector<T> z = M(r), p = z, Ap;
  T rz = dot(r, z);
  for (int k = 0; k <= max_iter; ++k) {
    // The recursive residual drifts slightly; confirm with a true residual.
    if (norm2(r) <= rtol * bnorm) {
      const double true_res = norm2(b - A * x);
      if (true_res <= rtol * bnorm || true_res <= residual_floor(A, x, bnorm)) {
        if (iterations) *iterations = k;
        return x;
      }
      r = b - A * x;
      M.apply(r, z);
      p = z;
      rz = dot(r, z);
    }
    if (k == max_iter) break;
    A.multiply(p, Ap);
    const T pAp = dot(Ap, p);
    if (!(real_of(pAp) > 0.0)) throw BreakdownError(k + 1, "pcg_solve: matrix is not positive definite");
    const T alpha = rz / pAp;
    axpy(alpha, p, x);
    axpy(-alpha, Ap, r);
    M.apply(r, z);
    const T rz_new = dot(r, z);
    const T beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  const double rel = norm2(b - A * x) / bnorm;
  if (rel <= rtol || rel * bnorm <= residual_floor(A, x, bnorm)) {
    if (iterations) *iterations = max_iter;
    return x;
  }
  throw NonConvergenceError(max_iter, rel,
                            "pcg_solve: no convergence in " + std::to_string(max_iter) +
                                " iterations (relative residual " + std::to_string(rel) + ")");
}

namespace detail {

// One left-preconditioned GMRES cycle of at most `steps` Arnoldi steps.
// Returns the number of steps performed; `stop` is checked on the
// preconditioned residual estimate after every step.
template <class T, class Stop, class OnStep>
int gmres_cycle(const CsrMatrix<T>& A, const Vector<T>& b, const LinearOperator<T>& M, Vector<T>& x, int steps,
                Stop stop, OnStep on_step) {
  using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  using Col = Eigen::Matrix<T, Eigen::Dynamic, 1>;
  const std::size_t n = A.rows();
  Vector<T> w = M(b - A * x);
  const double beta = norm2(w);
  if (beta == 0.0) return 0;
  std::vector<Vector<T>> V;
  V.reserve(steps + 1);
  for (auto& v : w) v /= beta;
  V.push_back(w);
  Mat H = Mat::Zero(steps + 1, steps);
  Col g = Col::Zero(steps + 1);
  g[0] = beta;
  std::vector<double> cs(steps);
  std::vector<T> sn(steps);
  int j = 0;
  auto solve_update = [&](int k) {
    Col y = Col::Zero(k);
    for (int i = k - 1; i >= 0; --i) {
      T s = g[i];
      for (int l = i + 1; l < k; ++l) s -= H(i, l) * y[l];
      y[i] = s / H(i, i);
    }
    Vector<T> xk = x;
    for (int i = 0; i < k; ++i) axpy(T(y[i]), V[i], xk);
    return xk;
  };
  Vector<T> Av;
  for (j = 0; j < steps; ++j) {
    A.multiply(V[j], Av);
    w = M(Av);
    for (int i = 0; i <= j; ++i) {
      H(i, j) = dot(w, V[i]);
      axpy(T(-H(i, j)), V[i], w);
    }
    const double hn = norm2(w);
    H(j + 1, j) = hn;
    for (int i = 0; i < j; ++i) {
      const T a = H(i, j), c = H(i + 1, j);
      H(i, j) = cs[i] * a + sn[i] * c;
      H(i + 1, j) = -conj_of(sn[i]) * a + cs[i] * c;
    }
    const T a = H(j, j);
    const T c = H(j + 1, j);
    const double r = std::sqrt(abs2(a) + abs2(c));
    if (r == 0.0) throw BreakdownError(j + 1, "gmres: singular Hessenberg matrix");
    if (std::abs(a) == 0.0) {
      cs[j] = 0.0;
      sn[j] = T(1);
    } else {
      cs[j] = std::abs(a) / r;
      sn[j] = (a / std::abs(a)) * conj_of(c) / r;
    }
    H(j, j) = cs[j] * a + sn[j] * c;
    H(j + 1, j) = T{};
    const T gj = g[j];
    g[j] = cs[j] * gj;
    g[j + 1] = -conj_of(sn[j]) * gj;
    const double res = std::abs(g[j + 1]);
    const bool happy = hn <= 1e-14 * beta;
    on_step(j + 1, res, [&] { return solve_update(j + 1); });
    if (happy || stop(res) || j + 1 == steps) {
      x = solve_update(j + 1);
      return j + 1;
    }
    w.resize(n);
    for (auto& v : w) v /= hn;
    V.push_back(w);
  }
  return j;
}

}  // namespace detail

/// m steps of left-preconditioned GMRES minimizing ||M(b - Ax)||_2, restarted
/// every `restart` steps.
template <class T>
KrylovResult<T> gmres(const CsrMatrix<T>& A, const Vector<T>& b, const LinearOperator<T>& M, const Vector<T>& x0,
                      int m, int restart, const KrylovOptions<T>& opt = {}) {
  const std::size_t n = A.rows();
  if (b.size() != n || x0.size() != n || M.size() != n) throw DimensionError("gmres: dimension mismatch");
  if (m < 0 || restart <= 0) throw std::invalid_argument("gmres: invalid step counts");
  KrylovResult<T> res{x0, {}};
  auto record_x = [&](const Vector<T>& x, double pres) {
    if (opt.reference) res.trace.energy_error.push_back(norm2(*opt.reference - x));
    res.trace.precond_residual.push_back(pres);
    if (opt.keep_snapshots) res.trace.snapshots.push_back(x);
  };
  record_x(res.x, norm2(M(b - A * res.x)));
  int done = 0;
  while (done < m) {
    const int steps = std::min(restart, m - done);
    const int taken = detail::gmres_cycle(
        A, b, M, res.x, steps, [](double) { return false; },
        [&](int, double r, auto&& current) {
          if (opt.reference || opt.keep_snapshots)
            record_x(current(), r);
          else
            res.trace.precond_residual.push_back(r);
        });
    done += taken;
    if (taken < steps) break;  // exact solution reached
  }
  res.trace.iterations = done;
  while (static_cast<int>(res.trace.precond_residual.size()) < m + 1) record_x(res.x, 0.0);
  return res;
}

/// Restarted GMRES until ||b - Ax||_2 <= rtol ||b||_2.
template <class T>
Vector<T> gmres_solve(const CsrMatrix<T>& A, const Vector<T>& b, const LinearOperator<T>& M, Vector<T> x, double rtol,
                      int restart, int max_iter, int* iterations = nullptr) {
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), T{});
    if (iterations) *iterations = 0;
    return x;
  }
  int total = 0;
  double factor = 1.0;
  const double mb = norm2(M(b));
  double rel = norm2(b - A * x) / bnorm;
  while (total < max_iter) {
    if (rel <= rtol || rel * bnorm <= residual_floor(A, x, bnorm)) break;
    const double target = rtol * factor * mb;
    const int taken = detail::gmres_cycle(
        A, b, M, x, std::min(restart, max_iter - total), [&](double r) { return r <= target; },
        [](int, double, auto&&) {});
    total += std::max(taken, 1);
    const double new_rel = norm2(b - A * x) / bnorm;
    if (new_rel > rtol && new_rel >= 0.5 * rel) factor *= 0.1;
    rel = new_rel;
  }
  if (iterations) *iterations = total;
  if (rel > rtol && rel * bnorm > residual_floor(A, x, bnorm))
    throw NonConvergenceError(total, rel,
                              "gmres_solve: no convergence in " + std::to_string(total) +
                                  " iterations (relative residual " + std::to_string(rel) + ")");
  return x;
}

}  // namespace smoothsc
