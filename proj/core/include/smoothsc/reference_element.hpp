#pragma once

#include <array>
#include <memory>
#include <vector>

#include <Eigen/Core>

namespace smoothsc {

enum class Family { lagrange, dg, nedelec1 };

/// Entity a local degree of freedom is attached to: entity_dim 0..3 (vertex,
/// edge, face, cell), the local index of that entity in the reference
/// topology, and the moment index within the entity.
struct LocalDof {
  int entity_dim;
  int local_entity;
  int index;
};

/// Basis values at a set of reference points. Scalar elements fill `value`
/// (1 x n), `grad` (3 x n) and optionally `hess` (9 x n, column-major 3x3);
/// vector elements fill `value` (3 x n) and `curl` (3 x n). All quantities are
/// with respect to reference coordinates.
struct Tabulation {
  std::vector<Eigen::MatrixXd> value;
  std::vector<Eigen::MatrixXd> grad;
  std::vector<Eigen::MatrixXd> hess;
  std::vector<Eigen::MatrixXd> curl;
};

/// Monomials x^a y^b z^c of total degree <= `degree` in `dim` variables.
class MonomialSet {
 public:
  MonomialSet(int dim, int degree);
  int size() const { return static_cast<int>(exps_.size()); }
  const std::array<int, 3>& exponent(int i) const { return exps_[i]; }
  /// Values, first derivatives (3 x n) and second derivatives (9 x n).
  void eval(const Eigen::Vector3d& x, Eigen::VectorXd& v, Eigen::MatrixXd* d1, Eigen::MatrixXd* d2) const;

 private:
  int dim_;
  std::vector<std::array<int, 3>> exps_;
};

class ReferenceElement {
 public:
  virtual ~ReferenceElement() = default;
  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int num_dofs() const { return static_cast<int>(dofs_.size()); }
  /// 1 for scalar elements, 3 for vector elements.
  virtual int value_dim() const = 0;
  const std::vector<LocalDof>& dofs() const { return dofs_; }
  /// Number of dofs attached to each entity of dimension `entity_dim`.
  int dofs_per_entity(int entity_dim) const { return per_entity_[entity_dim]; }
  virtual Tabulation tabulate(const std::vector<Eigen::Vector3d>& points, bool hessians = false) const = 0;

 protected:
  ReferenceElement(int dim, int degree) : dim_(dim), degree_(degree) {}
  int dim_;
  int degree_;
  std::vector<LocalDof> dofs_;
  std::array<int, 4> per_entity_{0, 0, 0, 0};
};

/// Continuous Lagrange element with equispaced nodes. Local dofs are ordered
/// vertices, edges, faces, interior; nodes on an edge run from its lower to
/// its higher local vertex, face nodes run over the (b, c) lattice offsets
/// from the lowest face vertex.
class LagrangeElement final : public ReferenceElement {
 public:
  LagrangeElement(int dim, int degree);
  int value_dim() const override { return 1; }
  const std::vector<Eigen::Vector3d>& nodes() const { return nodes_; }
  Tabulation tabulate(const std::vector<Eigen::Vector3d>& points, bool hessians = false) const override;

 private:
  MonomialSet mono_;
  std::vector<Eigen::Vector3d> nodes_;
  Eigen::MatrixXd coef_;  // monomial coefficients, one column per basis function
};

/// One quadrature term of a Nedelec degree-of-freedom functional:
///   l(u) = sum_terms weight * q(point) * u(point) . (x[to] - x[from]).
/// The moment weight q is folded into `weight`.
struct MomentTerm {
  Eigen::Vector3d point;
  double weight;
  int from;
  int to;
};

/// First-kind Nedelec element on tetrahedra (degree 1 or 2). Edge dofs are
/// Legendre-weighted tangential moments along the edge from its lower to its
/// higher vertex; degree-2 face dofs are moments against the two face edge
/// vectors leaving the lowest face vertex. Both functionals are invariant
/// under the covariant Piola map, so one reference basis serves every cell.
class NedelecElement final : public ReferenceElement {
 public:
  explicit NedelecElement(int degree);
  int value_dim() const override { return 3; }
  Tabulation tabulate(const std::vector<Eigen::Vector3d>& points, bool hessians = false) const override;
  const std::vector<MomentTerm>& functional(int i) const { return functionals_[i]; }

 private:
  MonomialSet mono_;
  std::vector<std::vector<MomentTerm>> functionals_;
  Eigen::MatrixXd coef_;  // (3 * monomials) x ndofs, component-major
};

/// Cached element instances.
std::shared_ptr<const ReferenceElement> get_element(Family family, int dim, int degree);

/// Reference vertices of the simplex of dimension `dim`.
Eigen::Vector3d reference_vertex(int dim, int v);

}  // namespace smoothsc
