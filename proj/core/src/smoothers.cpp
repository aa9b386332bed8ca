#include "smoothsc/smoothers.hpp"

#include <algorithm>
#include <stdexcept>

#include <Eigen/Dense>

#include "smoothsc/fe_function.hpp"

namespace smoothsc {

std::string to_string(SmootherKind kind) {
  switch (kind) {
    case SmootherKind::identity: return "identity";
    case SmootherKind::jacobi: return "jacobi";
    case SmootherKind::gs_forward: return "gs_forward";
    case SmootherKind::gs_backward: return "gs_backward";
    case SmootherKind::gs_symmetric: return "gs_symmetric";
    case SmootherKind::block_jacobi: return "block_jacobi";
    case SmootherKind::block_gs_symmetric: return "block_gs_symmetric";
    case SmootherKind::hx: return "hx";
  }
  return "?";
}

SmootherKind parse_smoother_kind(const std::string& name) {
  for (auto k : {SmootherKind::identity, SmootherKind::jacobi, SmootherKind::gs_forward, SmootherKind::gs_backward, SmootherKind::gs_symmetric,
                 SmootherKind::block_jacobi, SmootherKind::block_gs_symmetric, SmootherKind::hx})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown smoother kind '" + name + "'");
}

PatchSet build_patches(const Mesh& mesh, const DofMap& dm) {
  const Topology& topo = dm.topology();
  const int dim = mesh.dim();
  PatchSet ps;
  ps.patches.resize(mesh.num_vertices());
  auto entity_vertices = [&](const DofEntity& e) -> std::vector<int> {
    if (e.entity_dim == 0) return {e.entity};
    if (e.entity_dim == 1) return {topo.edges[e.entity][0], topo.edges[e.entity][1]};
    if (e.entity_dim == 2 && dim == 3)
      return {topo.faces[e.entity][0], topo.faces[e.entity][1], topo.faces[e.entity][2]};
    const auto c = mesh.cell(e.entity);
    return {c.begin(), c.end()};
  };
  for (std::size_t i = 0; i < dm.num_free(); ++i)
    for (int v : entity_vertices(dm.dof_entity(dm.free_to_global(i))))
      ps.patches[v].push_back(static_cast<int>(i));
  return ps;
}

template <class T>
struct Smoother<T>::Factors {
  using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  using Solver = std::conditional_t<std::is_same_v<T, double>, Eigen::LLT<Mat>, Eigen::PartialPivLU<Mat>>;
  std::vector<Solver> solvers;
  std::vector<std::size_t> vertex;  // patch -> vertex id
  std::vector<const std::vector<int>*> dofs;
};

template <class T>
Smoother<T>::~Smoother() = default;
template <class T>
Smoother<T>::Smoother(Smoother&&) noexcept = default;

template <class T>
Smoother<T>::Smoother(const SmootherSpec& spec, const CsrMatrix<T>& A) : spec_(spec), A_(A) {
  if (A.rows() != A.cols()) throw DimensionError("smoother: matrix is not square");
  if (spec.kind == SmootherKind::jacobi || spec.kind == SmootherKind::block_jacobi)
    if (!(spec.omega > 0.0 && spec.omega <= 1.0)) throw std::invalid_argument("smoother: omega must lie in (0, 1]");
  if (spec.kind == SmootherKind::identity) return;
  const Vector<T> d = A.diagonal();
  inv_diag_.resize(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] == T{}) throw ZeroPivotError(i, "smoother: zero diagonal entry at row " + std::to_string(i));
    inv_diag_[i] = T(1) / d[i];
  }
  if (spec.kind == SmootherKind::block_jacobi || spec.kind == SmootherKind::block_gs_symmetric) {
    if (!spec.patches) throw std::invalid_argument("smoother: block kinds need a patch set");
    factors_ = std::make_unique<Factors>();
    std::vector<char> covered(A.rows(), 0);
    for (std::size_t v = 0; v < spec.patches->size(); ++v) {
      const auto& p = spec.patches->patches[v];
      if (p.empty()) continue;
      const Eigen::Index n = static_cast<Eigen::Index>(p.size());
      typename Factors::Mat M(n, n);
      for (Eigen::Index a = 0; a < n; ++a) {
        if (static_cast<std::size_t>(p[a]) >= A.rows()) throw DimensionError("smoother: patch index out of range");
        covered[p[a]] = 1;
        for (Eigen::Index b = 0; b < n; ++b) M(a, b) = A(p[a], p[b]);
      }
      typename Factors::Solver solver(M);
      bool ok = true;
      if constexpr (std::is_same_v<T, double>)
        ok = solver.info() == Eigen::Success;
      else
        ok = std::abs(solver.determinant()) > 0.0;
      if (!ok) throw SingularPatchError(v, "smoother: singular patch matrix at vertex " + std::to_string(v));
      factors_->solvers.push_back(std::move(solver));
      factors_->vertex.push_back(v);
      factors_->dofs.push_back(&p);
    }
    for (std::size_t i = 0; i < covered.size(); ++i)
      if (!covered[i]) throw std::invalid_argument("smoother: dof " + std::to_string(i) + " lies in no patch");
  }
  if (spec.kind == SmootherKind::hx) {
    if constexpr (!std::is_same_v<T, double>) {
      throw std::invalid_argument("smoother: hx is real only");
    } else {
      if (!spec.hx) throw std::invalid_argument("smoother: hx needs auxiliary data");
      if (spec.hx->G.rows() != A.rows() || spec.hx->P.rows() != A.rows())
        throw DimensionError("smoother: hx data does not match the matrix");
    }
  }
}

template <class T>
void Smoother<T>::point_sweep(const Vector<T>& r, Vector<T>& x, bool forward) const {
  const std::size_t n = A_.rows();
  auto row = [&](std::size_t i) {
    T s = r[i];
    for (std::size_t k = A_.row_begin(i); k < A_.row_end(i); ++k) s -= A_.val(k) * x[A_.col(k)];
    x[i] += s * inv_diag_[i];
  };
  if (forward)
    for (std::size_t i = 0; i < n; ++i) row(i);
  else
    for (std::size_t i = n; i-- > 0;) row(i);
}

template <class T>
void Smoother<T>::block_sweep(const Vector<T>& r, Vector<T>& x, bool forward) const {
  const std::size_t np = factors_->solvers.size();
  Eigen::Matrix<T, Eigen::Dynamic, 1> res;
  auto patch = [&](std::size_t j) {
    const auto& p = *factors_->dofs[j];
    res.resize(static_cast<Eigen::Index>(p.size()));
    for (std::size_t a = 0; a < p.size(); ++a) {
      const std::size_t i = p[a];
      T s = r[i];
      for (std::size_t k = A_.row_begin(i); k < A_.row_end(i); ++k) s -= A_.val(k) * x[A_.col(k)];
      res[a] = s;
    }
    const Eigen::Matrix<T, Eigen::Dynamic, 1> c = factors_->solvers[j].solve(res);
    for (std::size_t a = 0; a < p.size(); ++a) x[p[a]] += c[a];
  };
  if (forward)
    for (std::size_t j = 0; j < np; ++j) patch(j);
  else
    for (std::size_t j = np; j-- > 0;) patch(j);
}

template <class T>
void Smoother<T>::apply(const Vector<T>& r, Vector<T>& e) const {
  const std::size_t n = A_.rows();
  if (r.size() != n) throw DimensionError("smoother: vector length does not match the matrix");
  e.assign(n, T{});
  switch (spec_.kind) {
    case SmootherKind::identity: e = r; break;
    case SmootherKind::jacobi:
      for (std::size_t i = 0; i < n; ++i) e[i] = T(spec_.omega) * inv_diag_[i] * r[i];
      break;
    case SmootherKind::gs_forward: point_sweep(r, e, true); break;
    case SmootherKind::gs_backward: point_sweep(r, e, false); break;
    case SmootherKind::gs_symmetric:
      point_sweep(r, e, true);
      point_sweep(r, e, false);
      break;
    case SmootherKind::block_jacobi: {
      Eigen::Matrix<T, Eigen::Dynamic, 1> loc;
      for (std::size_t j = 0; j < factors_->solvers.size(); ++j) {
        const auto& p = *factors_->dofs[j];
        loc.resize(static_cast<Eigen::Index>(p.size()));
        for (std::size_t a = 0; a < p.size(); ++a) loc[a] = r[p[a]];
        const Eigen::Matrix<T, Eigen::Dynamic, 1> c = factors_->solvers[j].solve(loc);
        for (std::size_t a = 0; a < p.size(); ++a) e[p[a]] += T(spec_.omega) * c[a];
      }
      break;
    }
    case SmootherKind::block_gs_symmetric:
      block_sweep(r, e, true);
      block_sweep(r, e, false);
      break;
    case SmootherKind::hx:
      if constexpr (std::is_same_v<T, double>) {
        const HxData& h = *spec_.hx;
        for (std::size_t i = 0; i < n; ++i) e[i] = h.inv_diag_nd[i] * r[i];
        Vector<double> g = h.G.transpose_multiply(r);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] *= h.inv_diag_lag[i];
        axpy(1.0, h.G * g, e);
        Vector<double> q = h.P.transpose_multiply(r);
        for (std::size_t i = 0; i < q.size(); ++i) q[i] *= h.inv_diag_vec[i];
        axpy(1.0, h.P * q, e);
      }
      break;
  }
}

SmootherSpec build_hx(const DofMap& nd, const DofMap& lag, const CsrMatrix<double>& A_nd,
                      const CsrMatrix<double>& A_lag) {
  if (nd.spec().family != Family::nedelec1 || lag.spec().family != Family::lagrange || lag.spec().dirichlet)
    throw std::invalid_argument("build_hx: expects a Nedelec space and a Lagrange space without Dirichlet dofs");
  if (nd.mesh_ptr() != lag.mesh_ptr()) throw std::invalid_argument("build_hx: spaces live on different meshes");
  if (A_nd.rows() != nd.num_free() || A_lag.rows() != lag.num_free())
    throw DimensionError("build_hx: matrix sizes do not match the spaces");
  auto hx = std::make_shared<HxData>();
  hx->G = discrete_gradient(nd, lag);
  hx->P = nedelec_interpolation(nd, lag);
  auto invert = [](const Vector<double>& d) {
    Vector<double> r(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d[i] == 0.0) throw ZeroPivotError(i, "build_hx: zero diagonal entry at row " + std::to_string(i));
      r[i] = 1.0 / d[i];
    }
    return r;
  };
  hx->inv_diag_nd = invert(A_nd.diagonal());
  hx->inv_diag_lag = invert(A_lag.diagonal());
  hx->inv_diag_vec.reserve(3 * hx->inv_diag_lag.size());
  for (int c = 0; c < 3; ++c)
    hx->inv_diag_vec.insert(hx->inv_diag_vec.end(), hx->inv_diag_lag.begin(), hx->inv_diag_lag.end());
  SmootherSpec s;
  s.kind = SmootherKind::hx;
  s.hx = std::move(hx);
  return s;
}

template <class T>
Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> to_dense(const LinearOperator<T>& op) {
  const std::size_t n = op.size();
  Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> D(n, n);
  Vector<T> x(n, T{}), y;
  for (std::size_t j = 0; j < n; ++j) {
    x[j] = T(1);
    op.apply(x, y);
    for (std::size_t i = 0; i < n; ++i) D(i, j) = y[i];
    x[j] = T{};
  }
  return D;
}

template class Smoother<double>;
template class Smoother<complex>;
template Eigen::MatrixXd to_dense(const LinearOperator<double>&);
template Eigen::MatrixXcd to_dense(const LinearOperator<complex>&);

}  // namespace smoothsc
