#include "smoothsc/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace smoothsc {

Eigen::Vector4d QuadratureRule::barycentric(std::size_t q) const {
  Eigen::Vector4d b = Eigen::Vector4d::Zero();
  double s = 0.0;
  for (int k = 0; k < dim; ++k) {
    b[k + 1] = points[q][k];
    s += points[q][k];
  }
  b[0] = 1.0 - s;
  return b;
}

// Golub-Welsch on the Jacobi three-term recurrence.
void gauss_jacobi(int n, double alpha, double beta, std::vector<double>& x, std::vector<double>& w) {
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  const double ab = alpha + beta;
  for (int k = 0; k < n; ++k) {
    const double d = 2.0 * k + ab;
    T(k, k) = (k == 0) ? (beta - alpha) / (ab + 2.0) : (beta * beta - alpha * alpha) / (d * (d + 2.0));
    if (k + 1 < n) {
      const double j = k + 1.0;
      const double dj = 2.0 * j + ab;
      const double b = std::sqrt(4.0 * j * (j + alpha) * (j + beta) * (j + ab) / (dj * dj * (dj + 1.0) * (dj - 1.0)));
      T(k, k + 1) = T(k + 1, k) = b;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  const double mu0 = std::pow(2.0, ab + 1.0) * std::tgamma(alpha + 1.0) * std::tgamma(beta + 1.0) / std::tgamma(ab + 2.0);
  x.resize(n);
  w.resize(n);
  for (int k = 0; k < n; ++k) {
    x[k] = es.eigenvalues()[k];
    const double v0 = es.eigenvectors()(0, k);
    w[k] = mu0 * v0 * v0;
  }
}

namespace {

// Rule on [0,1] for weight (1-t)^alpha with n points.
void jacobi01(int n, int alpha, std::vector<double>& t, std::vector<double>& w) {
  gauss_jacobi(n, alpha, 0.0, t, w);
  const double scale = std::pow(0.5, alpha + 1);
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = 0.5 * (1.0 + t[i]);
    w[i] *= scale;
  }
}

QuadratureRule build(int dim, int degree) {
  QuadratureRule r;
  r.dim = dim;
  r.degree = degree;
  if (degree <= 1) {
    const double vol = dim == 1 ? 1.0 : dim == 2 ? 0.5 : 1.0 / 6.0;
    r.points.push_back(Eigen::Vector3d::Constant(1.0 / (dim + 1)).cwiseProduct(Eigen::Vector3d(1, dim > 1, dim > 2)));
    r.weights.push_back(vol);
    r.degree = 1;
    return r;
  }
  const int n = (degree + 2) / 2;
  std::vector<double> t0, w0, t1, w1, t2, w2;
  jacobi01(n, 0, t0, w0);
  if (dim == 1) {
    for (int i = 0; i < n; ++i) {
      r.points.emplace_back(t0[i], 0.0, 0.0);
      r.weights.push_back(w0[i]);
    }
    return r;
  }
  jacobi01(n, 1, t1, w1);
  if (dim == 2) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        r.points.emplace_back(t0[i] * (1.0 - t1[j]), t1[j], 0.0);
        r.weights.push_back(w0[i] * w1[j]);
      }
    return r;
  }
  jacobi01(n, 2, t2, w2);
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const double z = t2[l];
        const double y = t1[j] * (1.0 - z);
        const double x = t0[i] * (1.0 - t1[j]) * (1.0 - z);
        r.points.emplace_back(x, y, z);
        r.weights.push_back(w0[i] * w1[j] * w2[l]);
      }
  return r;
}

}  // namespace

QuadratureRule make_quadrature(int dim, int degree) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("make_quadrature: dimension must be 1, 2 or 3");
  if (degree < 0 || (dim == 2 && degree > 14) || (dim == 3 && degree > 10) || degree > 40)
    throw std::invalid_argument("make_quadrature: unsupported degree " + std::to_string(degree) + " in dimension " +
                                std::to_string(dim));
  static std::mutex mutex;
  static std::map<std::pair<int, int>, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find({dim, degree});
  if (it == cache.end()) it = cache.emplace(std::make_pair(dim, degree), build(dim, degree)).first;
  return it->second;
}

}  // namespace smoothsc
