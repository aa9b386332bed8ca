#pragma once

#include <functional>
#include <string>

#include "smoothsc/csr.hpp"
#include "smoothsc/dofmap.hpp"
#include "smoothsc/fe_function.hpp"

namespace smoothsc {

enum class FormKind { poisson_h1, dg_poisson, hcurl, cip_biharmonic, helmholtz_robin };

std::string to_string(FormKind kind);

struct FormSpec {
  FormKind kind = FormKind::poisson_h1;
  double gamma = 10.0;    // penalty for dg_poisson and cip_biharmonic
  double kappa = 1.0;     // wave number for helmholtz_robin
  double reaction = 0.0;  // poisson_h1: adds reaction * (u, v)
  double mass = 1.0;      // hcurl: weight of (u, v); 0 leaves the curl-curl part
  int quad_degree = -1;   // -1: 2 * (degree + 1)
};

/// Source data. Scalar forms read `f` (or `fc`/`gc` for Helmholtz), hcurl
/// reads `fvec`. `quad_degree` < 0 selects 2 * (degree + 1); set it
/// explicitly to integrate coarse and enriched loads with one rule.
struct SourceData {
  std::function<double(const Point&)> f;
  std::function<Eigen::Vector3d(const Point&)> fvec;
  std::function<complex(const Point&)> fc;
  std::function<complex(const Point&, const Eigen::Vector3d&)> gc;  // (x, outward normal)
  int quad_degree = -1;
};

CsrMatrix<double> assemble_matrix(const FormSpec& form, const DofMap& dm);
CsrMatrix<complex> assemble_matrix_complex(const FormSpec& form, const DofMap& dm);
Vector<double> assemble_rhs(const FormSpec& form, const SourceData& data, const DofMap& dm);
Vector<complex> assemble_rhs_complex(const FormSpec& form, const SourceData& data, const DofMap& dm);

/// Geometry of one facet: its vertices, measure, size h_E, the unit normal
/// pointing out of the first adjacent cell, and quadrature points/weights in
/// physical coordinates.
struct FacetQuadrature {
  double h = 0.0;
  Eigen::Vector3d normal;
  std::vector<Point> points;
  std::vector<double> weights;
};

FacetQuadrature facet_quadrature(const Mesh& mesh, const Topology& topo, std::size_t facet, int degree);

/// Reference coordinates of physical point x in a cell.
inline Eigen::Vector3d to_reference(const CellGeometry& g, const Point& x) {
  Eigen::Vector3d r = g.Jinv * (x - g.x0);
  return r;
}

}  // namespace smoothsc
