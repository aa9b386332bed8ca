#pragma once

#include <memory>
#include <string>
#include <vector>

#include "smoothsc/csr.hpp"
#include "smoothsc/dofmap.hpp"
#include "smoothsc/operator.hpp"

namespace smoothsc {

enum class SmootherKind {
  identity,
  jacobi,
  gs_forward,
  gs_backward,
  gs_symmetric,
  block_jacobi,
  block_gs_symmetric,
  hx
};

std::string to_string(SmootherKind kind);
SmootherKind parse_smoother_kind(const std::string& name);

/// Vertex-star patches: patch j holds the free dofs attached to vertex j and
/// to every edge, face and cell containing j, as free indices in ascending
/// order. Vertices without free dofs keep an empty patch.
struct PatchSet {
  std::vector<std::vector<int>> patches;
  std::size_t size() const { return patches.size(); }
};

PatchSet build_patches(const Mesh& mesh, const DofMap& dm);

/// Auxiliary data of the HX smoother on free Nedelec dofs.
struct HxData {
  CsrMatrix<double> G;          // discrete gradient, Nd x P
  CsrMatrix<double> P;          // vector nodal interpolation, Nd x 3P
  Vector<double> inv_diag_nd;   // D_Nd^{-1}
  Vector<double> inv_diag_lag;  // D^{-1} of the scalar Lagrange matrix
  Vector<double> inv_diag_vec;  // 3-fold repetition of inv_diag_lag
};

struct SmootherSpec {
  SmootherKind kind = SmootherKind::jacobi;
  double omega = 1.0;  // jacobi and block_jacobi damping
  std::shared_ptr<const PatchSet> patches;
  std::shared_ptr<const HxData> hx;

  static SmootherSpec jacobi(double omega = 2.0 / 3.0) { return {SmootherKind::jacobi, omega, {}, {}}; }
  static SmootherSpec point(SmootherKind kind) { return {kind, 1.0, {}, {}}; }
  static SmootherSpec block_jacobi(std::shared_ptr<const PatchSet> p, double omega = 1.0) {
    return {SmootherKind::block_jacobi, omega, std::move(p), {}};
  }
  static SmootherSpec block_gs_symmetric(std::shared_ptr<const PatchSet> p) {
    return {SmootherKind::block_gs_symmetric, 1.0, std::move(p), {}};
  }
};

/// Raised when a patch principal submatrix is not positive definite.
class SingularPatchError : public std::runtime_error {
 public:
  SingularPatchError(std::size_t vertex, const std::string& what) : std::runtime_error(what), vertex_(vertex) {}
  std::size_t vertex() const { return vertex_; }

 private:
  std::size_t vertex_;
};

/// A SmootherSpec bound to a matrix, with diagonal and patch factors cached.
/// Holds a reference to A, which must outlive it.
///   identity:           r (plain CG when used inside PCG)
///   jacobi:             omega D^{-1} r
///   gs_forward:         (D - L)^{-1} r
///   gs_backward:        (D - L^T)^{-1} r
///   gs_symmetric:       (D - L^T)^{-1} D (D - L)^{-1} r
///   block_jacobi:       omega sum_j I_j A_j^{-1} I_j^T r
///   block_gs_symmetric: forward patch sweep followed by the reverse sweep
///   hx:                 (D_Nd^{-1} + G D^{-1} G^T + P Dvec^{-1} P^T) r
template <class T>
class Smoother final : public LinearOperator<T> {
 public:
  Smoother(const SmootherSpec& spec, const CsrMatrix<T>& A);
  ~Smoother() override;
  Smoother(Smoother&&) noexcept;

  std::size_t size() const override { return A_.rows(); }
  void apply(const Vector<T>& r, Vector<T>& e) const override;
  const SmootherSpec& spec() const { return spec_; }

 private:
  struct Factors;
  void point_sweep(const Vector<T>& r, Vector<T>& x, bool forward) const;
  void block_sweep(const Vector<T>& r, Vector<T>& x, bool forward) const;

  SmootherSpec spec_;
  const CsrMatrix<T>& A_;
  Vector<T> inv_diag_;
  std::unique_ptr<Factors> factors_;
};

/// HX smoother for an Nd_{k+1} matrix. `lag` is the scalar P_{k+1} space on
/// the same mesh without Dirichlet elimination and `A_lag` its matrix for
/// (grad u, grad v) + (u, v).
SmootherSpec build_hx(const DofMap& nd, const DofMap& lag, const CsrMatrix<double>& A_nd,
                      const CsrMatrix<double>& A_lag);

/// Dense matrix of a linear operator, column by column (test and diagnostic use).
template <class T>
Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> to_dense(const LinearOperator<T>& op);

}  // namespace smoothsc
