#include "smoothsc/solvers.hpp"

#include <random>

#include "smoothsc/smoothers.hpp"

namespace smoothsc {

Vector<double> exact_solve(const CsrMatrix<double>& A, const Vector<double>& b, double rtol) {
  const JacobiOperator<double> M(A);
  const int cap = static_cast<int>(std::max<std::size_t>(20 * A.rows(), 20));
  return pcg_solve(A, b, M, Vector<double>(A.rows(), 0.0), rtol, cap);
}

Vector<complex> exact_solve(const CsrMatrix<complex>& A, const Vector<complex>& b, double rtol) {
  // Symmetric Gauss-Seidel keeps the iteration count of the indefinite
  // Helmholtz systems far below what a diagonal preconditioner needs.
  const Smoother<complex> M(SmootherSpec::point(SmootherKind::gs_symmetric), A);
  const int cap = static_cast<int>(std::max<std::size_t>(20 * A.rows(), 200));
  return gmres_solve(A, b, M, Vector<complex>(A.rows(), complex{}), rtol, 100, cap);
}

LambdaMaxResult lambda_max(const LinearOperator<double>& S, const CsrMatrix<double>& A, int iters, std::uint64_t seed,
                           const Vector<double>* start) {
  const std::size_t n = A.rows();
  Vector<double> v(n);
  if (start) {
    v = *start;
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (auto& x : v) x = dist(rng);
  }
  Vector<double> Av = A * v;
  double anorm2 = dot(Av, v);
  if (!(anorm2 > 0.0)) throw std::invalid_argument("lambda_max: start vector has zero energy");
  LambdaMaxResult res;
  for (int k = 0; k < iters; ++k) {
    const double s = 1.0 / std::sqrt(anorm2);
    for (auto& x : v) x *= s;
    for (auto& x : Av) x *= s;
    Vector<double> w = S(Av);  // w = S A v
    const Vector<double> Aw = A * w;
    res.lambda = dot(Aw, v);  // a(SAv, v) with a(v, v) = 1
    res.history.push_back(res.lambda);
    v = std::move(w);
    Av = Aw;
    anorm2 = dot(Av, v);
    if (!(anorm2 > 0.0)) break;
  }
  return res;
}

FunctionOperator<double> inverse_operator(const CsrMatrix<double>& A, double rtol) {
  return FunctionOperator<double>(A.rows(), [&A, rtol](const Vector<double>& x, Vector<double>& y) {
    y = exact_solve(A, x, rtol);
  });
}

}  // namespace smoothsc
