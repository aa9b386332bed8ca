#pragma once

#include <functional>

#include <Eigen/Core>

#include "smoothsc/csr.hpp"
#include "smoothsc/dofmap.hpp"

namespace smoothsc {

/// Affine map x = x0 + J xhat of a cell. In 2D the Jacobian is embedded in a
/// 3x3 matrix with J(2,2) = 1, so the same transforms serve both dimensions.
struct CellGeometry {
  Eigen::Matrix3d J;
  Eigen::Matrix3d Jinv;
  Eigen::Matrix3d JinvT;
  double det;      // signed
  double measure;  // |det| times the reference measure
  Point x0;
  Point map(const Eigen::Vector3d& xhat) const { return x0 + J * xhat; }
};

CellGeometry cell_geometry(const Mesh& mesh, std::size_t cell);

template <class T>
using Vec3 = Eigen::Matrix<T, 3, 1>;

/// Value record of a discrete function at one point. Scalar spaces fill
/// value/grad/hess, Nedelec spaces fill vec/curl.
template <class T>
struct FeValue {
  T value{};
  Vec3<T> grad = Vec3<T>::Zero();
  Eigen::Matrix<T, 3, 3> hess = Eigen::Matrix<T, 3, 3>::Zero();
  Vec3<T> vec = Vec3<T>::Zero();
  Vec3<T> curl = Vec3<T>::Zero();
};

/// Evaluates the function with free-dof coefficients `coeffs` at reference
/// point `xhat` of `cell` (Nedelec values use the covariant Piola map).
template <class T>
FeValue<T> eval(const DofMap& dm, const Vector<T>& coeffs, std::size_t cell, const Eigen::Vector3d& xhat);

/// Local coefficient vector of `cell` (masked dofs contribute zero).
template <class T>
Eigen::Matrix<T, Eigen::Dynamic, 1> local_coefficients(const DofMap& dm, const Vector<T>& coeffs, std::size_t cell);

/// Nodal interpolant of a scalar function (Lagrange and DG spaces).
template <class T>
Vector<T> interpolate(const DofMap& dm, const std::function<T(const Point&)>& fn);

/// Moment interpolant of a vector field (Nedelec spaces).
Vector<double> interpolate_vector(const DofMap& dm, const std::function<Eigen::Vector3d(const Point&)>& fn);

/// Matrix of the embedding V -> V~ between consecutive degrees on one mesh,
/// acting on free-dof coefficient vectors.
CsrMatrix<double> prolongation(const DofMap& coarse, const DofMap& fine);

/// Discrete gradient: Nedelec functionals applied to gradients of the scalar
/// Lagrange basis (columns over all Lagrange dofs).
CsrMatrix<double> discrete_gradient(const DofMap& nd, const DofMap& lag);

/// Nedelec interpolation of the vector Lagrange space; column c * n + j is
/// the Cartesian component c of scalar basis function j.
CsrMatrix<double> nedelec_interpolation(const DofMap& nd, const DofMap& lag);

}  // namespace smoothsc
