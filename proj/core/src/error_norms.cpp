#include "smoothsc/error_norms.hpp"

#include <stdexcept>

#include "smoothsc/quadrature.hpp"

namespace smoothsc {

std::string to_string(NormKind kind) {
  switch (kind) {
    case NormKind::h1_semi: return "h1_semi";
    case NormKind::l2: return "l2";
    case NormKind::broken_1h: return "broken_1h";
    case NormKind::cip_2h: return "cip_2h";
    case NormKind::hcurl: return "hcurl";
    case NormKind::h1_kappa: return "h1_kappa";
  }
  return "?";
}

namespace {

template <class T>
double sq(const T& v) {
  return abs2(v);
}

template <class T, int R, int C>
double sq(const Eigen::Matrix<T, R, C>& m) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < m.size(); ++i) s += abs2(m(i));
  return s;
}

template <class T>
void require(const std::function<T>& f, const char* what, NormKind kind) {
  if (!f) throw std::invalid_argument("norm " + to_string(kind) + " requires exact " + what);
}

// Discrete quantities of a scalar function at one reference point.
template <class T>
struct ScalarAt {
  T value;
  Vec3<T> grad;
  Eigen::Matrix<T, 3, 3> hess;
};

template <class T>
ScalarAt<T> scalar_at(const CellGeometry& g, const Tabulation& tab, std::size_t q,
                      const Eigen::Matrix<T, Eigen::Dynamic, 1>& c, bool hessian) {
  ScalarAt<T> r;
  r.value = (tab.value[q].template cast<T>() * c)(0);
  r.grad = g.JinvT.template cast<T>() * (tab.grad[q].template cast<T>() * c);
  r.hess.setZero();
  if (hessian) {
    Eigen::Matrix<T, 3, 3> h;
    for (int k = 0; k < 9; ++k) h(k % 3, k / 3) = (tab.hess[q].row(k).template cast<T>() * c)(0);
    r.hess = g.JinvT.template cast<T>() * h * g.Jinv.template cast<T>();
  }
  return r;
}

}  // namespace

template <class T>
double error_norm(const DofMap& dm, const Vector<T>& coeffs, const ExactSolution<T>& exact, const NormSpec& norm) {
  const NormKind kind = norm.kind;
  const bool nedelec = dm.spec().family == Family::nedelec1;
  if ((kind == NormKind::hcurl) != nedelec) throw std::invalid_argument("norm does not match the space family");
  if (kind == NormKind::broken_1h && dm.spec().family != Family::dg)
    throw std::invalid_argument("broken_1h norm expects a DG space");
  switch (kind) {
    case NormKind::h1_semi: require(exact.grad, "gradient", kind); break;
    case NormKind::l2: require(exact.value, "value", kind); break;
    case NormKind::broken_1h:
      require(exact.grad, "gradient", kind);
      require(exact.value, "value", kind);
      break;
    case NormKind::cip_2h:
      require(exact.hess, "hessian", kind);
      require(exact.grad, "gradient", kind);
      break;
    case NormKind::hcurl:
      require(exact.vec, "vector value", kind);
      require(exact.curl, "curl", kind);
      break;
    case NormKind::h1_kappa:
      require(exact.grad, "gradient", kind);
      require(exact.value, "value", kind);
      break;
  }
  const int deg = norm.quad_degree >= 0 ? norm.quad_degree : 2 * dm.spec().degree + 4;
  const Mesh& mesh = dm.mesh();
  const bool hessian = kind == NormKind::cip_2h;
  const QuadratureRule rule = make_quadrature(mesh.dim(), deg);
  const Tabulation tab = dm.element().tabulate(rule.points, hessian);
  double total = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry g = cell_geometry(mesh, c);
    const auto lc = local_coefficients(dm, coeffs, c);
    const double adet = std::abs(g.det);
    double cell_sum = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Point x = g.map(rule.points[q]);
      double e = 0.0;
      if (nedelec) {
        const Vec3<T> v = g.JinvT.template cast<T>() * (tab.value[q].template cast<T>() * lc);
        const Vec3<T> cu = (g.J / g.det).template cast<T>() * (tab.curl[q].template cast<T>() * lc);
        e = sq(Vec3<T>(exact.vec(x) - v)) + sq(Vec3<T>(exact.curl(x) - cu));
      } else {
        const ScalarAt<T> s = scalar_at(g, tab, q, lc, hessian);
        switch (kind) {
          case NormKind::h1_semi:
          case NormKind::broken_1h: e = sq(Vec3<T>(exact.grad(x) - s.grad)); break;
          case NormKind::l2: e = sq(T(exact.value(x) - s.value)); break;
          case NormKind::cip_2h: e = sq(Eigen::Matrix<T, 3, 3>(exact.hess(x) - s.hess)); break;
          case NormKind::h1_kappa:
            e = sq(Vec3<T>(exact.grad(x) - s.grad)) + norm.kappa * norm.kappa * sq(T(exact.value(x) - s.value));
            break;
          default: break;
        }
      }
      cell_sum += rule.weights[q] * adet * e;
    }
    total += cell_sum;
  }
  if (kind == NormKind::broken_1h || kind == NormKind::cip_2h) {
    const Topology& topo = dm.topology();
    for (std::size_t f = 0; f < topo.num_facets(); ++f) {
      const FacetQuadrature fq = facet_quadrature(mesh, topo, f, deg);
      const auto cells = topo.facet_cells[f];
      const int nsides = cells[1] < 0 ? 1 : 2;
      double facet_sum = 0.0;
      for (std::size_t q = 0; q < fq.points.size(); ++q) {
        T jump{};
        for (int s = 0; s < nsides; ++s) {
          const CellGeometry g = cell_geometry(mesh, cells[s]);
          const Tabulation ft = dm.element().tabulate({to_reference(g, fq.points[q])}, false);
          const auto lc = local_coefficients(dm, coeffs, cells[s]);
          const ScalarAt<T> v = scalar_at(g, ft, 0, lc, false);
          const T trace = kind == NormKind::broken_1h ? v.value : T(fq.normal.template cast<T>().dot(v.grad));
          jump += (s == 0 ? T(-1) : T(1)) * trace;
        }
        if (nsides == 1) {
          const Point& x = fq.points[q];
          jump += kind == NormKind::broken_1h ? exact.value(x) : T(fq.normal.template cast<T>().dot(exact.grad(x)));
        }
        facet_sum += fq.weights[q] * abs2(jump);
      }
      total += norm.gamma / fq.h * facet_sum;
    }
  }
  return std::sqrt(total);
}

std::vector<double> cell_h1_seminorms(const DofMap& dm, const Vector<double>& coeffs, int quad_degree) {
  if (dm.element().value_dim() != 1) throw std::invalid_argument("cell_h1_seminorms expects a scalar space");
  const int deg = quad_degree >= 0 ? quad_degree : 2 * dm.spec().degree;
  const Mesh& mesh = dm.mesh();
  const QuadratureRule rule = make_quadrature(mesh.dim(), deg);
  const Tabulation tab = dm.element().tabulate(rule.points);
  std::vector<double> out(mesh.num_cells());
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry g = cell_geometry(mesh, c);
    const auto lc = local_coefficients(dm, coeffs, c);
    double s = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Eigen::Vector3d grad = g.JinvT * (tab.grad[q] * lc);
      s += rule.weights[q] * grad.squaredNorm();
    }
    out[c] = std::sqrt(s * std::abs(g.det));
  }
  return out;
}

template double error_norm(const DofMap&, const Vector<double>&, const ExactSolution<double>&, const NormSpec&);
template double error_norm(const DofMap&, const Vector<complex>&, const ExactSolution<complex>&, const NormSpec&);

}  // namespace smoothsc
