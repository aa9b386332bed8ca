#include "smoothsc/postprocess.hpp"

#include <cmath>
#include <stdexcept>

namespace smoothsc {

std::string to_string(Method method) {
  switch (method) {
    case Method::fixed_point: return "fp";
    case Method::pcg: return "pcg";
    case Method::gmres: return "gmres";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  if (name == "fp" || name == "fixed_point") return Method::fixed_point;
  if (name == "pcg") return Method::pcg;
  if (name == "gmres") return Method::gmres;
  throw std::invalid_argument("unknown method '" + name + "'");
}

template <class T>
Vector<T> apply_real(const CsrMatrix<double>& P, const Vector<T>& x) {
  if (x.size() != P.cols()) throw DimensionError("apply_real: vector length does not match matrix columns");
  Vector<T> y(P.rows(), T{});
  for (std::size_t i = 0; i < P.rows(); ++i) {
    T s{};
    for (std::size_t k = P.row_begin(i); k < P.row_end(i); ++k) s += P.val(k) * x[P.col(k)];
    y[i] = s;
  }
  return y;
}

template <class T>
std::vector<Vector<T>> smooth_postprocess_sequence(const Vector<T>& u_h, const PostprocessConfig& cfg,
                                                   const CsrMatrix<T>& A, const Vector<T>& f,
                                                   const CsrMatrix<double>& iota, const LinearOperator<T>& S) {
  if (cfg.m < 0) throw std::invalid_argument("smooth_postprocess: negative step count");
  Vector<T> u0 = apply_real(iota, u_h);
  if (u0.size() != A.rows() || f.size() != A.rows() || S.size() != A.rows())
    throw DimensionError("smooth_postprocess: enriched system does not match the prolongation");
  std::vector<Vector<T>> seq;
  switch (cfg.method) {
    case Method::fixed_point: {
      seq.push_back(u0);
      for (int k = 0; k < cfg.m; ++k) {
        Vector<T> u = seq.back();
        axpy(T(1), S(f - A * u), u);
        seq.push_back(std::move(u));
      }
      break;
    }
    case Method::pcg: {
      // The complex systems are complex symmetric, not Hermitian.
      if constexpr (!std::is_same_v<T, double>)
        throw std::invalid_argument("smooth_postprocess: pcg needs a real SPD system, use gmres");
      KrylovOptions<T> opt;
      opt.keep_snapshots = true;
      auto res = pcg(A, f, S, u0, cfg.m, opt);
      seq = std::move(res.trace.snapshots);
      break;
    }
    case Method::gmres: {
      KrylovOptions<T> opt;
      opt.keep_snapshots = true;
      auto res = gmres(A, f, S, u0, cfg.m, cfg.restart, opt);
      seq = std::move(res.trace.snapshots);
      break;
    }
  }
  // PCG stops early when <r, z> underflows; later iterates equal the last one.
  while (static_cast<int>(seq.size()) < cfg.m + 1) seq.push_back(seq.back());
  return seq;
}

template <class T>
Vector<T> smooth_postprocess(const Vector<T>& u_h, const PostprocessConfig& cfg, const CsrMatrix<T>& A,
                             const Vector<T>& f, const CsrMatrix<double>& iota, const LinearOperator<T>& S) {
  return smooth_postprocess_sequence(u_h, cfg, A, f, iota, S).back();
}

double f_factor(double alpha, double beta) {
  if (alpha < 0.0 || beta < 0.0) throw std::invalid_argument("f_factor: negative exponent");
  auto pw = [](double x) { return x == 0.0 ? 1.0 : std::pow(x, x); };
  return pw(alpha) * pw(beta) / pw(alpha + beta);
}

double epsilon_fixed(int m, double delta) {
  if (!(delta > 1.0)) throw std::invalid_argument("epsilon_fixed: delta must exceed 1");
  if (m < 0) throw std::invalid_argument("epsilon_fixed: negative step count");
  if (m <= (delta - 1.0) / 2.0) return std::pow((delta - 1.0) / delta, m);
  return std::sqrt(delta) * f_factor(m, 0.5);
}

double epsilon_pcg(int m, double lambda, double delta) {
  if (!(lambda > 0.0) || !(delta > 0.0)) throw std::invalid_argument("epsilon_pcg: lambda and delta must be positive");
  return std::sqrt(lambda * delta) / (2.0 * m + 1.0);
}

std::vector<double> smoothing_decay(const CsrMatrix<double>& A, const Vector<double>& f, const Vector<double>& u0,
                                    const Vector<double>& reference, const LinearOperator<double>& S, Method method,
                                    int K) {
  if (method == Method::gmres) throw std::invalid_argument("smoothing_decay: energy curves need fp or pcg");
  const PostprocessConfig cfg{method, K};
  const auto seq = smooth_postprocess_sequence(u0, cfg, A, f, CsrMatrix<double>::identity(u0.size()), S);
  const double e0 = energy_norm(A, reference - u0);
  std::vector<double> curve;
  for (const auto& u : seq) curve.push_back(e0 > 0.0 ? energy_norm(A, reference - u) / e0 : 0.0);
  return curve;
}

double measure_delta(const CsrMatrix<double>& A, const LinearOperator<double>& S, const Vector<double>& e) {
  const double ea = real_of(dot(A * e, e));
  if (!(ea > 0.0)) throw std::invalid_argument("measure_delta: zero energy");
  // CG on S y = e using only applications of S.
  const std::size_t n = e.size();
  Vector<double> y(n, 0.0), r = e, p = e, Sp;
  double rr = dot(r, r);
  const double tol2 = 1e-20 * rr;
  for (std::size_t k = 0; k < 20 * n + 20 && rr > tol2; ++k) {
    S.apply(p, Sp);
    const double alpha = rr / dot(Sp, p);
    axpy(alpha, p, y);
    axpy(-alpha, Sp, r);
    const double rr_new = dot(r, r);
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + (rr_new / rr) * p[i];
    rr = rr_new;
  }
  return dot(e, y) / ea;
}

template Vector<double> apply_real(const CsrMatrix<double>&, const Vector<double>&);
template Vector<complex> apply_real(const CsrMatrix<double>&, const Vector<complex>&);
template std::vector<Vector<double>> smooth_postprocess_sequence(const Vector<double>&, const PostprocessConfig&,
                                                                 const CsrMatrix<double>&, const Vector<double>&,
                                                                 const CsrMatrix<double>&,
                                                                 const LinearOperator<double>&);
template std::vector<Vector<complex>> smooth_postprocess_sequence(const Vector<complex>&, const PostprocessConfig&,
                                                                  const CsrMatrix<complex>&, const Vector<complex>&,
                                                                  const CsrMatrix<double>&,
                                                                  const LinearOperator<complex>&);
template Vector<double> smooth_postprocess(const Vector<double>&, const PostprocessConfig&, const CsrMatrix<double>&,
                                           const Vector<double>&, const CsrMatrix<double>&,
                                           const LinearOperator<double>&);
template Vector<complex> smooth_postprocess(const Vector<complex>&, const PostprocessConfig&,
                                            const CsrMatrix<complex>&, const Vector<complex>&,
                                            const CsrMatrix<double>&, const LinearOperator<complex>&);

}  // namespace smoothsc
