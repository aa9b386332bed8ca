#pragma once

#include <vector>

#include <Eigen/Core>

namespace smoothsc {

/// Quadrature on the reference simplex of dimension `dim` (interval [0,1],
/// triangle (0,0),(1,0),(0,1) or the unit tetrahedron). Points are reference
/// coordinates; unused trailing components are zero.
struct QuadratureRule {
  int dim = 0;
  int degree = 0;
  std::vector<Eigen::Vector3d> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  /// Barycentric coordinates (1 - sum(x), x_1, ..., x_dim) of point q.
  Eigen::Vector4d barycentric(std::size_t q) const;
};

/// Positive-weight collapsed Gauss-Jacobi rule exact for polynomials of total
/// degree `degree`. Degree <= 1 gives the one-point centroid rule.
/// Supported: any degree on intervals, <= 14 on triangles, <= 10 on tets.
QuadratureRule make_quadrature(int dim, int degree);

/// Gauss-Jacobi nodes/weights on [-1, 1] for weight (1-x)^alpha (1+x)^beta.
void gauss_jacobi(int n, double alpha, double beta, std::vector<double>& x, std::vector<double>& w);

}  // namespace smoothsc
