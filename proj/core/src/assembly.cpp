#include "smoothsc/assembly.hpp"

#include <stdexcept>

#include "smoothsc/quadrature.hpp"
#include <Eigen/Dense>

namespace smoothsc {

std::string to_string(FormKind kind) {
  switch (kind) {
    case FormKind::poisson_h1: return "poisson_h1";
    case FormKind::dg_poisson: return "dg_poisson";
    case FormKind::hcurl: return "hcurl";
    case FormKind::cip_biharmonic: return "cip_biharmonic";
    case FormKind::helmholtz_robin: return "helmholtz_robin";
  }
  return "?";
}

namespace {

using MatX = Eigen::MatrixXd;

void check_pairing(const FormSpec& form, const DofMap& dm) {
  const SpaceSpec& s = dm.spec();
  bool ok = false;
  switch (form.kind) {
    case FormKind::poisson_h1: ok = s.family == Family::lagrange && !s.complex; break;
    case FormKind::dg_poisson: ok = s.family == Family::dg && !s.complex; break;
    case FormKind::hcurl: ok = s.family == Family::nedelec1; break;
    case FormKind::cip_biharmonic: ok = s.family == Family::lagrange && s.dim == 2 && !s.complex; break;
    case FormKind::helmholtz_robin: ok = s.family == Family::lagrange && s.complex && !s.dirichlet; break;
  }
  if (!ok) throw std::invalid_argument("form " + to_string(form.kind) + " cannot be assembled on a " +
                                       to_string(s.family) + " space with these options");
  if ((form.kind == FormKind::dg_poisson || form.kind == FormKind::cip_biharmonic) && !(form.gamma > 0.0))
    throw std::invalid_argument("penalty parameter gamma must be positive");
  if (form.kind == FormKind::helmholtz_robin && !(form.kappa > 0.0))
    throw std::invalid_argument("wave number kappa must be positive");
}

int quad_degree(const FormSpec& form, const DofMap& dm) {
  return form.quad_degree >= 0 ? form.quad_degree : 2 * (dm.spec().degree + 1);
}

// Cell-quadrature data shared by all cells.
struct CellTable {
  QuadratureRule rule;
  Tabulation tab;
};

CellTable cell_table(const DofMap& dm, int degree, bool hessians) {
  CellTable t{make_quadrature(dm.spec().dim, degree), {}};
  t.tab = dm.element().tabulate(t.rule.points, hessians);
  return t;
}

template <class T>
void scatter(TripletBuilder<T>& b, const DofMap& rows, std::span<const int> rdofs, std::span<const int> cdofs,
             const Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>& local) {
  for (std::size_t i = 0; i < rdofs.size(); ++i) {
    const int fi = rows.free_index(rdofs[i]);
    if (fi < 0) continue;
    for (std::size_t j = 0; j < cdofs.size(); ++j) {
      const int fj = rows.free_index(cdofs[j]);
      if (fj < 0) continue;
      b.add(fi, fj, local(i, j));
    }
  }
}

// Physical gradients (3 x n) at quadrature point q.
MatX phys_grad(const CellGeometry& g, const Tabulation& tab, std::size_t q) { return g.JinvT * tab.grad[q]; }

// Physical Hessians: row r*3+c holds d2/dx_r dx_c, one column per basis function.
MatX phys_hess(const CellGeometry& g, const Eigen::MatrixXd& href) {
  MatX out(9, href.cols());
  for (Eigen::Index i = 0; i < href.cols(); ++i) {
    Eigen::Matrix3d H;
    for (int k = 0; k < 9; ++k) H(k % 3, k / 3) = href(k, i);
    const Eigen::Matrix3d P = g.JinvT * H * g.Jinv;
    for (int k = 0; k < 9; ++k) out(k, i) = P(k % 3, k / 3);
  }
  return out;
}

// Cell contributions of the real forms.
void cell_terms(const FormSpec& form, const DofMap& dm, TripletBuilder<double>& b) {
  const bool hess = form.kind == FormKind::cip_biharmonic;
  const CellTable t = cell_table(dm, quad_degree(form, dm), hess);
  const int n = dm.dofs_per_cell();
  const Mesh& mesh = dm.mesh();
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry g = cell_geometry(mesh, c);
    const double adet = std::abs(g.det);
    MatX K = MatX::Zero(n, n);
    for (std::size_t q = 0; q < t.rule.size(); ++q) {
      const double w = t.rule.weights[q] * adet;
      switch (form.kind) {
        case FormKind::poisson_h1:
        case FormKind::dg_poisson: {
          const MatX G = phys_grad(g, t.tab, q);
          K.noalias() += w * G.transpose() * G;
          if (form.kind == FormKind::poisson_h1 && form.reaction != 0.0)
            K.noalias() += (w * form.reaction) * t.tab.value[q].transpose() * t.tab.value[q];
          break;
        }
        case FormKind::cip_biharmonic: {
          const MatX H = phys_hess(g, t.tab.hess[q]);
          K.noalias() += w * H.transpose() * H;
          break;
        }
        case FormKind::hcurl: {
          const MatX C = (g.J / g.det) * t.tab.curl[q];
          const MatX V = g.JinvT * t.tab.value[q];
          K.noalias() += w * C.transpose() * C;
          if (form.mass != 0.0) K.noalias() += (w * form.mass) * V.transpose() * V;
          break;
        }
        default: break;
      }
    }
    auto dofs = dm.cell_dofs(c);
    scatter(b, dm, dofs, dofs, K);
  }
}

// Facet terms of the symmetric interior penalty forms. For DG the traces are
// values and normal derivatives; for CIP they are normal derivatives and
// second normal derivatives.
void facet_terms(const FormSpec& form, const DofMap& dm, TripletBuilder<double>& b) {
  const Mesh& mesh = dm.mesh();
  const Topology& topo = dm.topology();
  const bool cip = form.kind == FormKind::cip_biharmonic;
  const int n = dm.dofs_per_cell();
  const int deg = quad_degree(form, dm);
  for (std::size_t f = 0; f < topo.num_facets(); ++f) {
    const FacetQuadrature fq = facet_quadrature(mesh, topo, f, deg);
    const std::array<int, 2> cells = topo.facet_cells[f];
    const int nsides = cells[1] < 0 ? 1 : 2;
    const double avg = nsides == 2 ? 0.5 : 1.0;
    const Eigen::Vector3d& nrm = fq.normal;
    MatX K = MatX::Zero(nsides * n, nsides * n);
    std::array<CellGeometry, 2> geo;
    for (int s = 0; s < nsides; ++s) geo[s] = cell_geometry(mesh, cells[s]);
    for (std::size_t q = 0; q < fq.points.size(); ++q) {
      Eigen::RowVectorXd jump(nsides * n), mean(nsides * n);
      for (int s = 0; s < nsides; ++s) {
        const Tabulation tab = dm.element().tabulate({to_reference(geo[s], fq.points[q])}, cip);
        const double sign = s == 0 ? 1.0 : -1.0;
        const MatX G = geo[s].JinvT * tab.grad[0];
        const Eigen::RowVectorXd dn = nrm.transpose() * G;
        if (!cip) {
          jump.segment(s * n, n) = sign * tab.value[0];
          mean.segment(s * n, n) = avg * dn;
        } else {
          const MatX H = phys_hess(geo[s], tab.hess[0]);
          Eigen::RowVectorXd dnn(n);
          for (int i = 0; i < n; ++i) {
            Eigen::Matrix3d Hi;
            for (int k = 0; k < 9; ++k) Hi(k % 3, k / 3) = H(k, i);
            dnn[i] = nrm.dot(Hi * nrm);
          }
          jump.segment(s * n, n) = sign * dn;
          mean.segment(s * n, n) = avg * dnn;
        }
      }
      const double w = fq.weights[q];
      // a(u, v) rows = test (v), cols = trial (u)
      K.noalias() -= w * (jump.transpose() * mean + mean.transpose() * jump);
      K.noalias() += (w * form.gamma / fq.h) * jump.transpose() * jump;
    }
    std::vector<int> dofs;
    for (int s = 0; s < nsides; ++s) {
      auto d = dm.cell_dofs(cells[s]);
      dofs.insert(dofs.end(), d.begin(), d.end());
    }
    scatter(b, dm, std::span<const int>(dofs), std::span<const int>(dofs), K);
  }
}

}  // namespace

FacetQuadrature facet_quadrature(const Mesh& mesh, const Topology& topo, std::size_t facet, int degree) {
  FacetQuadrature fq;
  const FacetKey key = topo.facet_key(facet);
  const int dim = mesh.dim();
  const QuadratureRule rule = make_quadrature(dim - 1, degree);
  const Point a = mesh.vertex(key[0]);
  const Point b = mesh.vertex(key[1]);
  double jac = 0.0;
  if (dim == 2) {
    const Eigen::Vector3d t = b - a;
    jac = t.norm();
    fq.h = jac;
    fq.normal = Eigen::Vector3d(t.y(), -t.x(), 0.0) / jac;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      fq.points.push_back(a + rule.points[q][0] * t);
      fq.weights.push_back(rule.weights[q] * jac);
    }
  } else {
    const Point c = mesh.vertex(key[2]);
    const Eigen::Vector3d cr = (b - a).cross(c - a);
    jac = cr.norm();
    fq.h = std::max({(b - a).norm(), (c - a).norm(), (c - b).norm()});
    fq.normal = cr / jac;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      fq.points.push_back(a + rule.points[q][0] * (b - a) + rule.points[q][1] * (c - a));
      fq.weights.push_back(rule.weights[q] * jac);
    }
  }
  // Orient the normal out of the first adjacent cell.
  const int c0 = topo.facet_cells[facet][0];
  Point centroid = Point::Zero();
  for (int v : mesh.cell(c0)) centroid += mesh.vertex(v);
  centroid /= (dim + 1);
  if (fq.normal.dot(a - centroid) < 0.0) fq.normal = -fq.normal;
  return fq;
}

CsrMatrix<double> assemble_matrix(const FormSpec& form, const DofMap& dm) {
  if (form.kind == FormKind::helmholtz_robin)
    throw std::invalid_argument("helmholtz_robin is complex; use assemble_matrix_complex");
  check_pairing(form, dm);
  const std::size_t n = dm.num_free();
  TripletBuilder<double> b(n, n);
  b.reserve(dm.mesh().num_cells() * dm.dofs_per_cell() * dm.dofs_per_cell());
  cell_terms(form, dm, b);
  if (form.kind == FormKind::dg_poisson || form.kind == FormKind::cip_biharmonic) facet_terms(form, dm, b);
  return symmetrize(b.build());
}

CsrMatrix<complex> assemble_matrix_complex(const FormSpec& form, const DofMap& dm) {
  check_pairing(form, dm);
  if (form.kind != FormKind::helmholtz_robin)
    throw std::invalid_argument("assemble_matrix_complex supports helmholtz_robin only");
  const Mesh& mesh = dm.mesh();
  const Topology& topo = dm.topology();
  const std::size_t nfree = dm.num_free();
  const int n = dm.dofs_per_cell();
  const double k2 = form.kappa * form.kappa;
  TripletBuilder<complex> b(nfree, nfree);
  const CellTable t = cell_table(dm, quad_degree(form, dm), false);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry g = cell_geometry(mesh, c);
    const double adet = std::abs(g.det);
    MatX K = MatX::Zero(n, n);
    for (std::size_t q = 0; q < t.rule.size(); ++q) {
      const double w = t.rule.weights[q] * adet;
      const MatX G = phys_grad(g, t.tab, q);
      K.noalias() += w * (G.transpose() * G - k2 * t.tab.value[q].transpose() * t.tab.value[q]);
    }
    auto dofs = dm.cell_dofs(c);
    scatter<complex>(b, dm, dofs, dofs, K.cast<complex>());
  }
  for (std::size_t f = 0; f < topo.num_facets(); ++f) {
    if (!topo.is_boundary_facet(f)) continue;
    const int c = topo.facet_cells[f][0];
    const FacetQuadrature fq = facet_quadrature(mesh, topo, f, quad_degree(form, dm));
    const CellGeometry g = cell_geometry(mesh, c);
    MatX M = MatX::Zero(n, n);
    for (std::size_t q = 0; q < fq.points.size(); ++q) {
      const Tabulation tab = dm.element().tabulate({to_reference(g, fq.points[q])});
      M.noalias() += fq.weights[q] * tab.value[0].transpose() * tab.value[0];
    }
    auto dofs = dm.cell_dofs(c);
    scatter<complex>(b, dm, dofs, dofs, (complex(0.0, -form.kappa) * M.cast<complex>()).eval());
  }
  return symmetrize(b.build());
}

Vector<double> assemble_rhs(const FormSpec& form, const SourceData& data, const DofMap& dm) {
  if (form.kind == FormKind::helmholtz_robin)
    throw std::invalid_argument("helmholtz_robin is complex; use assemble_rhs_complex");
  check_pairing(form, dm);
  const int deg = data.quad_degree >= 0 ? data.quad_degree : 2 * (dm.spec().degree + 1);
  const CellTable t = cell_table(dm, deg, false);
  const Mesh& mesh = dm.mesh();
  const int n = dm.dofs_per_cell();
  Vector<double> rhs(dm.num_free(), 0.0);
  const bool vec = form.kind == FormKind::hcurl;
  if (vec ? !data.fvec : !data.f) throw std::invalid_argument("assemble_rhs: missing source function");
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry g = cell_geometry(mesh, c);
    const double adet = std::abs(g.det);
    Eigen::VectorXd local = Eigen::VectorXd::Zero(n);
    for (std::size_t q = 0; q < t.rule.size(); ++q) {
      const double w = t.rule.weights[q] * adet;
      const Point x = g.map(t.rule.points[q]);
      if (vec)
        local.noalias() += w * (g.JinvT * t.tab.value[q]).transpose() * data.fvec(x);
      else
        local.noalias() += (w * data.f(x)) * t.tab.value[q].transpose();
    }
    auto dofs = dm.cell_dofs(c);
    for (int i = 0; i < n; ++i) {
      const int fi = dm.free_index(dofs[i]);
      if (fi >= 0) rhs[fi] += local[i];
    }
  }
  return rhs;
}

Vector<complex> assemble_rhs_complex(const FormSpec& form, const SourceData& data, const DofMap& dm) {
  check_pairing(form, dm);
  if (form.kind != FormKind::helmholtz_robin)
    throw std::invalid_argument("assemble_rhs_complex supports helmholtz_robin only");
  const int deg = data.quad_degree >= 0 ? data.quad_degree : 2 * (dm.spec().degree + 1);
  const CellTable t = cell_table(dm, deg, false);
  const Mesh& mesh = dm.mesh();
  const Topology& topo = dm.topology();
  const int n = dm.dofs_per_cell();
  Vector<complex> rhs(dm.num_free(), complex{});
  auto add_local = [&](std::size_t c, const Eigen::VectorXcd& local) {
    auto dofs = dm.cell_dofs(c);
    for (int i = 0; i < n; ++i) {
      const int fi = dm.free_index(dofs[i]);
      if (fi >= 0) rhs[fi] += local[i];
    }
  };
  if (data.fc) {
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
      const CellGeometry g = cell_geometry(mesh, c);
      const double adet = std::abs(g.det);
      Eigen::VectorXcd local = Eigen::VectorXcd::Zero(n);
      for (std::size_t q = 0; q < t.rule.size(); ++q) {
        const complex fv = data.fc(g.map(t.rule.points[q]));
        local -= (t.rule.weights[q] * adet * fv) * t.tab.value[q].transpose().cast<complex>();
      }
      add_local(c, local);
    }
  }
  if (data.gc) {
    for (std::size_t f = 0; f < topo.num_facets(); ++f) {
      if (!topo.is_boundary_facet(f)) continue;
      const int c = topo.facet_cells[f][0];
      const FacetQuadrature fq = facet_quadrature(mesh, topo, f, deg);
      const CellGeometry g = cell_geometry(mesh, c);
      Eigen::VectorXcd local = Eigen::VectorXcd::Zero(n);
      for (std::size_t q = 0; q < fq.points.size(); ++q) {
        const Tabulation tab = dm.element().tabulate({to_reference(g, fq.points[q])});
        local += (fq.weights[q] * data.gc(fq.points[q], fq.normal)) * tab.value[0].transpose().cast<complex>();
      }
      add_local(c, local);
    }
  }
  return rhs;
}

}  // namespace smoothsc
