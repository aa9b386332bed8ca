#pragma once

#include <string>
#include <vector>

#include "smoothsc/csr.hpp"
#include "smoothsc/krylov.hpp"
#include "smoothsc/operator.hpp"

namespace smoothsc {

enum class Method { fixed_point, pcg, gmres };

std::string to_string(Method method);
/// Accepts "fp", "fixed_point", "pcg", "gmres".
Method parse_method(const std::string& name);

struct PostprocessConfig {
  Method method = Method::pcg;
  int m = 0;
  int restart = 1 << 20;  // gmres only; no restart within m by default
};

/// y = P x for a real matrix acting on real or complex vectors.
template <class T>
Vector<T> apply_real(const CsrMatrix<double>& P, const Vector<T>& x);

/// R_k u_h for k = 0..cfg.m: u_0 = iota u_h, then cfg.m steps of the fixed
/// point iteration u_k = u_{k-1} + S(f - A u_{k-1}), of PCG with
/// preconditioner S, or of left-preconditioned GMRES.
template <class T>
std::vector<Vector<T>> smooth_postprocess_sequence(const Vector<T>& u_h, const PostprocessConfig& cfg,
                                                   const CsrMatrix<T>& A, const Vector<T>& f,
                                                   const CsrMatrix<double>& iota, const LinearOperator<T>& S);

/// R_m u_h, the last entry of the sequence.
template <class T>
Vector<T> smooth_postprocess(const Vector<T>& u_h, const PostprocessConfig& cfg, const CsrMatrix<T>& A,
                             const Vector<T>& f, const CsrMatrix<double>& iota, const LinearOperator<T>& S);

/// max_{t in [0,1]} t^a (1-t)^b = a^a b^b / (a+b)^(a+b), with 0^0 = 1.
double f_factor(double alpha, double beta);

/// Fixed-point smoothing rate: ((d-1)/d)^m when m <= (d-1)/2, otherwise
/// sqrt(d) f(m, 1/2). Throws for d <= 1 or m < 0.
double epsilon_fixed(int m, double delta);

/// PCG smoothing rate sqrt(lambda delta) / (2m + 1).
double epsilon_pcg(int m, double lambda, double delta);

/// ||u* - u_k||_a / ||u* - u_0||_a for k = 0..K, u* = reference.
std::vector<double> smoothing_decay(const CsrMatrix<double>& A, const Vector<double>& f, const Vector<double>& u0,
                                    const Vector<double>& reference, const LinearOperator<double>& S, Method method,
                                    int K);

/// ||e||^2_{S^{-1}} / ||e||^2_a with the S^{-1} norm from CG on S (rtol 1e-10).
double measure_delta(const CsrMatrix<double>& A, const LinearOperator<double>& S, const Vector<double>& e);

}  // namespace smoothsc
