#pragma once

#include <cmath>
#include <random>

#include "smoothsc/csr.hpp"
#include "smoothsc/mesh.hpp"

namespace smoothsc::test {

inline Vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

/// tridiag(-1, 2, -1) of size n.
inline CsrMatrix<double> laplace_1d(std::size_t n) {
  TripletBuilder<double> b(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    b.add(static_cast<int>(i), static_cast<int>(i), 2.0);
    if (i > 0) b.add(static_cast<int>(i), static_cast<int>(i) - 1, -1.0);
    if (i + 1 < n) b.add(static_cast<int>(i), static_cast<int>(i) + 1, -1.0);
  }
  return b.build();
}

/// Random SPD matrix B B^T + n I as CSR.
inline CsrMatrix<double> random_spd(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd B(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) B(i, j) = u(rng);
  Eigen::MatrixXd A = B * B.transpose() + static_cast<double>(n) * Eigen::MatrixXd::Identity(n, n);
  return CsrMatrix<double>::from_dense(A);
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace smoothsc::test
