#pragma once

#include <cstdint>
#include <iosfwd>

#include "smoothsc/csr.hpp"
#include "smoothsc/krylov.hpp"
#include "smoothsc/operator.hpp"

namespace smoothsc {

/// Reference solve to ||b - Ax||_2 <= rtol ||b||_2. Real systems use
/// diagonally preconditioned CG capped at 20 n iterations; complex systems
/// use Jacobi-preconditioned restarted GMRES.
Vector<double> exact_solve(const CsrMatrix<double>& A, const Vector<double>& b, double rtol = 1e-12);
Vector<complex> exact_solve(const CsrMatrix<complex>& A, const Vector<complex>& b, double rtol = 1e-12);

/// Power iteration v <- S A v normalized in the A-norm. Returns the final
/// Rayleigh quotient a(SAv, v) / a(v, v). The start vector is uniform random
/// from `seed` unless `start` is given.
struct LambdaMaxResult {
  double lambda = 0.0;
  std::vector<double> history;  // Rayleigh quotient after each iteration
};

LambdaMaxResult lambda_max(const LinearOperator<double>& S, const CsrMatrix<double>& A, int iters,
                           std::uint64_t seed = 1, const Vector<double>* start = nullptr);

/// Operator v -> A^{-1} v through exact_solve.
FunctionOperator<double> inverse_operator(const CsrMatrix<double>& A, double rtol = 1e-13);

/// Matrix Market coordinate format ("real general" / "complex general").
void write_matrix_market(std::ostream& out, const CsrMatrix<double>& A);
void write_matrix_market(std::ostream& out, const CsrMatrix<complex>& A);
CsrMatrix<double> read_matrix_market(std::istream& in);

}  // namespace smoothsc
