#include "smoothsc/fe_function.hpp"

#include <stdexcept>
#include <Eigen/Dense>

namespace smoothsc {

CellGeometry cell_geometry(const Mesh& mesh, std::size_t cell) {
  auto v = mesh.cell(cell);
  CellGeometry g;
  g.x0 = mesh.vertex(v[0]);
  g.J = Eigen::Matrix3d::Identity();
  for (int k = 0; k < mesh.dim(); ++k) g.J.col(k) = mesh.vertex(v[k + 1]) - g.x0;
  g.det = g.J.determinant();
  if (g.det == 0.0) throw std::runtime_error("degenerate cell " + std::to_string(cell));
  g.Jinv = g.J.inverse();
  g.JinvT = g.Jinv.transpose();
  g.measure = std::abs(g.det) / (mesh.dim() == 2 ? 2.0 : 6.0);
  return g;
}

namespace {

const LagrangeElement& lagrange_of(const DofMap& dm) {
  const auto* el = dynamic_cast<const LagrangeElement*>(&dm.element());
  if (!el) throw std::invalid_argument("expected a Lagrange or DG space");
  return *el;
}

const NedelecElement& nedelec_of(const DofMap& dm) {
  const auto* el = dynamic_cast<const NedelecElement*>(&dm.element());
  if (!el) throw std::invalid_argument("expected a Nedelec space");
  return *el;
}

}  // namespace

template <class T>
Eigen::Matrix<T, Eigen::Dynamic, 1> local_coefficients(const DofMap& dm, const Vector<T>& coeffs, std::size_t cell) {
  if (coeffs.size() != dm.num_free()) throw DimensionError("coefficient vector does not match the space");
  auto dofs = dm.cell_dofs(cell);
  Eigen::Matrix<T, Eigen::Dynamic, 1> c(dofs.size());
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    const int f = dm.free_index(dofs[i]);
    c[i] = f < 0 ? T{} : coeffs[f];
  }
  return c;
}

template <class T>
FeValue<T> eval(const DofMap& dm, const Vector<T>& coeffs, std::size_t cell, const Eigen::Vector3d& xhat) {
  if (cell >= dm.mesh().num_cells()) throw std::out_of_range("eval: cell index out of range");
  const auto c = local_coefficients(dm, coeffs, cell);
  const CellGeometry g = cell_geometry(dm.mesh(), cell);
  const Tabulation tab = dm.element().tabulate({xhat}, dm.element().value_dim() == 1);
  FeValue<T> out;
  if (dm.element().value_dim() == 1) {
    out.value = (tab.value[0].template cast<T>() * c)(0);
    const Vec3<T> gref = tab.grad[0].template cast<T>() * c;
    out.grad = g.JinvT.template cast<T>() * gref;
    Eigen::Matrix<T, 3, 3> href = Eigen::Matrix<T, 3, 3>::Zero();
    for (int k = 0; k < 9; ++k) href(k % 3, k / 3) = (tab.hess[0].row(k).template cast<T>() * c)(0);
    out.hess = g.JinvT.template cast<T>() * href * g.Jinv.template cast<T>();
  } else {
    const Vec3<T> vref = tab.value[0].template cast<T>() * c;
    const Vec3<T> cref = tab.curl[0].template cast<T>() * c;
    out.vec = g.JinvT.template cast<T>() * vref;
    out.curl = g.J.template cast<T>() * cref / T(g.det);
  }
  return out;
}

template <class T>
Vector<T> interpolate(const DofMap& dm, const std::function<T(const Point&)>& fn) {
  const LagrangeElement& el = lagrange_of(dm);
  Vector<T> out(dm.num_free(), T{});
  std::vector<char> done(dm.ndof(), 0);
  for (std::size_t c = 0; c < dm.mesh().num_cells(); ++c) {
    const CellGeometry g = cell_geometry(dm.mesh(), c);
    auto dofs = dm.cell_dofs(c);
    for (std::size_t i = 0; i < dofs.size(); ++i) {
      const int f = dm.free_index(dofs[i]);
      if (f < 0 || done[dofs[i]]) continue;
      done[dofs[i]] = 1;
      out[f] = fn(g.map(el.nodes()[i]));
    }
  }
  return out;
}

Vector<double> interpolate_vector(const DofMap& dm, const std::function<Eigen::Vector3d(const Point&)>& fn) {
  const NedelecElement& el = nedelec_of(dm);
  Vector<double> out(dm.num_free(), 0.0);
  std::vector<char> done(dm.ndof(), 0);
  const Mesh& mesh = dm.mesh();
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry g = cell_geometry(mesh, c);
    auto v = mesh.cell(c);
    auto dofs = dm.cell_dofs(c);
    for (std::size_t i = 0; i < dofs.size(); ++i) {
      const int f = dm.free_index(dofs[i]);
      if (f < 0 || done[dofs[i]]) continue;
      done[dofs[i]] = 1;
      double s = 0.0;
      for (const MomentTerm& t : el.functional(static_cast<int>(i)))
        s += t.weight * fn(g.map(t.point)).dot(mesh.vertex(v[t.to]) - mesh.vertex(v[t.from]));
      out[f] = s;
    }
  }
  return out;
}

namespace {

// Assembles a matrix whose rows are fine-space functionals that do not depend
// on the cell they are evaluated from; each row is filled once.
template <class LocalFn>
CsrMatrix<double> assemble_functional_rows(const DofMap& rows, std::size_t ncols, LocalFn local) {
  TripletBuilder<double> b(rows.num_free(), ncols);
  std::vector<char> done(rows.ndof(), 0);
  for (std::size_t c = 0; c < rows.mesh().num_cells(); ++c) {
    auto dofs = rows.cell_dofs(c);
    for (std::size_t i = 0; i < dofs.size(); ++i) {
      const int f = rows.free_index(dofs[i]);
      if (f < 0 || done[dofs[i]]) continue;
      done[dofs[i]] = 1;
      local(c, static_cast<int>(i), [&](int col, double v) {
        if (std::abs(v) > 1e-13) b.add(f, col, v);
      });
    }
  }
  return b.build();
}

}  // namespace

CsrMatrix<double> prolongation(const DofMap& coarse, const DofMap& fine) {
  const SpaceSpec& cs = coarse.spec();
  const SpaceSpec& fs = fine.spec();
  if (&coarse.mesh() != &fine.mesh() || cs.family != fs.family || fs.degree != cs.degree + 1 ||
      cs.dirichlet != fs.dirichlet || cs.dim != fs.dim)
    throw std::invalid_argument("prolongation: incompatible spaces");
  const int nf = fine.dofs_per_cell();
  const int nc = coarse.dofs_per_cell();
  Eigen::MatrixXd L(nf, nc);
  if (cs.family == Family::nedelec1) {
    const NedelecElement& fe = nedelec_of(fine);
    for (int i = 0; i < nf; ++i) {
      L.row(i).setZero();
      for (const MomentTerm& t : fe.functional(i)) {
        const Tabulation tab = coarse.element().tabulate({t.point});
        const Eigen::Vector3d tangent = reference_vertex(3, t.to) - reference_vertex(3, t.from);
        L.row(i) += t.weight * tangent.transpose() * tab.value[0];
      }
    }
  } else {
    const Tabulation tab = coarse.element().tabulate(lagrange_of(fine).nodes());
    for (int i = 0; i < nf; ++i) L.row(i) = tab.value[i];
  }
  return assemble_functional_rows(fine, coarse.num_free(), [&](std::size_t c, int i, auto&& put) {
    auto cd = coarse.cell_dofs(c);
    for (int j = 0; j < nc; ++j) {
      const int f = coarse.free_index(cd[j]);
      if (f >= 0) put(f, L(i, j));
    }
  });
}

CsrMatrix<double> discrete_gradient(const DofMap& nd, const DofMap& lag) {
  if (&nd.mesh() != &lag.mesh() || lag.spec().family != Family::lagrange || lag.spec().dirichlet)
    throw std::invalid_argument("discrete_gradient: space mismatch");
  const NedelecElement& ne = nedelec_of(nd);
  const int nl = lag.dofs_per_cell();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(nd.dofs_per_cell(), nl);
  for (int i = 0; i < nd.dofs_per_cell(); ++i)
    for (const MomentTerm& t : ne.functional(i)) {
      const Tabulation tab = lag.element().tabulate({t.point});
      const Eigen::Vector3d tangent = reference_vertex(3, t.to) - reference_vertex(3, t.from);
      L.row(i) += t.weight * tangent.transpose() * tab.grad[0];
    }
  return assemble_functional_rows(nd, lag.num_free(), [&](std::size_t c, int i, auto&& put) {
    auto ld = lag.cell_dofs(c);
    for (int j = 0; j < nl; ++j) put(lag.free_index(ld[j]), L(i, j));
  });
}

CsrMatrix<double> nedelec_interpolation(const DofMap& nd, const DofMap& lag) {
  if (&nd.mesh() != &lag.mesh() || lag.spec().family != Family::lagrange || lag.spec().dirichlet)
    throw std::invalid_argument("nedelec_interpolation: space mismatch");
  const NedelecElement& ne = nedelec_of(nd);
  const int nl = lag.dofs_per_cell();
  const int nlag = static_cast<int>(lag.num_free());
  // Scalar moments of each Lagrange basis function per (functional, term).
  std::vector<std::vector<Eigen::RowVectorXd>> moments(nd.dofs_per_cell());
  for (int i = 0; i < nd.dofs_per_cell(); ++i)
    for (const MomentTerm& t : ne.functional(i)) {
      const Tabulation tab = lag.element().tabulate({t.point});
      moments[i].push_back(t.weight * tab.value[0]);
    }
  const Mesh& mesh = nd.mesh();
  return assemble_functional_rows(nd, 3 * lag.num_free(), [&](std::size_t c, int i, auto&& put) {
    auto v = mesh.cell(c);
    auto ld = lag.cell_dofs(c);
    const auto& terms = ne.functional(i);
    Eigen::MatrixXd row = Eigen::MatrixXd::Zero(3, nl);
    for (std::size_t q = 0; q < terms.size(); ++q) {
      const Eigen::Vector3d tangent = mesh.vertex(v[terms[q].to]) - mesh.vertex(v[terms[q].from]);
      row += tangent * moments[i][q];
    }
    for (int comp = 0; comp < 3; ++comp)
      for (int j = 0; j < nl; ++j) put(comp * nlag + lag.free_index(ld[j]), row(comp, j));
  });
}

template FeValue<double> eval(const DofMap&, const Vector<double>&, std::size_t, const Eigen::Vector3d&);
template FeValue<complex> eval(const DofMap&, const Vector<complex>&, std::size_t, const Eigen::Vector3d&);
template Eigen::Matrix<double, Eigen::Dynamic, 1> local_coefficients(const DofMap&, const Vector<double>&,
                                                                      std::size_t);
template Eigen::Matrix<complex, Eigen::Dynamic, 1> local_coefficients(const DofMap&, const Vector<complex>&,
                                                                       std::size_t);
template Vector<double> interpolate(const DofMap&, const std::function<double(const Point&)>&);
template Vector<complex> interpolate(const DofMap&, const std::function<complex(const Point&)>&);

}  // namespace smoothsc
