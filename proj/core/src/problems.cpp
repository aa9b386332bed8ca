#include "smoothsc/problems.hpp"

#include <cmath>
#include <stdexcept>

#include "smoothsc/msh_reader.hpp"
#include "smoothsc/solvers.hpp"

namespace smoothsc {

namespace {

constexpr double pi = 3.14159265358979323846;

using V3 = Eigen::Vector3d;
using M3 = Eigen::Matrix3d;

// u = (3 - 4x^2)(3 - (x + sqrt3 y)^2)(3 - (x - sqrt3 y)^2), zero on the hexagon.
void hexagon_solution(Problem& p) {
  const double s3 = std::sqrt(3.0);
  p.exact.value = [s3](const Point& x) {
    const double a = 3 - 4 * x[0] * x[0], pp = x[0] + s3 * x[1], q = x[0] - s3 * x[1];
    return a * (3 - pp * pp) * (3 - q * q);
  };
  p.exact.grad = [s3](const Point& x) {
    const double a = 3 - 4 * x[0] * x[0], pp = x[0] + s3 * x[1], q = x[0] - s3 * x[1];
    const double b = 3 - pp * pp, c = 3 - q * q;
    const double ax = -8 * x[0], bx = -2 * pp, by = -2 * s3 * pp, cx = -2 * q, cy = 2 * s3 * q;
    return V3(ax * b * c + a * bx * c + a * b * cx, a * by * c + a * b * cy, 0.0);
  };
  p.source.f = [](const Point& x) {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    return 216 - 432 * r2 + 72 * r2 * r2;
  };
}

// u = sin(pi x) sin(pi y), f = 2 pi^2 u.
void sine_solution(Problem& p) {
  p.exact.value = [](const Point& x) { return std::sin(pi * x[0]) * std::sin(pi * x[1]); };
  p.exact.grad = [](const Point& x) {
    return V3(pi * std::cos(pi * x[0]) * std::sin(pi * x[1]), pi * std::sin(pi * x[0]) * std::cos(pi * x[1]), 0.0);
  };
  p.exact.hess = [](const Point& x) {
    const double sx = std::sin(pi * x[0]), sy = std::sin(pi * x[1]);
    const double cx = std::cos(pi * x[0]), cy = std::cos(pi * x[1]);
    M3 h = M3::Zero();
    h(0, 0) = -pi * pi * sx * sy;
    h(1, 1) = -pi * pi * sx * sy;
    h(0, 1) = h(1, 0) = pi * pi * cx * cy;
    return h;
  };
  p.source.f = [](const Point& x) { return 2 * pi * pi * std::sin(pi * x[0]) * std::sin(pi * x[1]); };
}

// u = pi^-2 (sin px cos py cos pz, -cos px sin py cos pz, 0), f = (1 + 3 pi^2) u.
void maxwell_solution(Problem& p) {
  auto u = [](const Point& x) -> V3 {
    const double sx = std::sin(pi * x[0]), sy = std::sin(pi * x[1]);
    const double cx = std::cos(pi * x[0]), cy = std::cos(pi * x[1]), cz = std::cos(pi * x[2]);
    return V3(sx * cy * cz, -cx * sy * cz, 0.0) / (pi * pi);
  };
  p.exact.vec = u;
  p.exact.curl = [](const Point& x) -> V3 {
    const double sx = std::sin(pi * x[0]), sy = std::sin(pi * x[1]), sz = std::sin(pi * x[2]);
    const double cx = std::cos(pi * x[0]), cy = std::cos(pi * x[1]), cz = std::cos(pi * x[2]);
    return V3(-cx * sy * sz, -sx * cy * sz, 2 * sx * sy * cz) / pi;
  };
  p.source.fvec = [u](const Point& x) { return V3((1 + 3 * pi * pi) * u(x)); };
}

// u = (1 - cos 2pi x)(1 - cos 2pi y), f = Delta^2 u.
void biharmonic_solution(Problem& p) {
  const double w = 2 * pi;
  p.exact.value = [w](const Point& x) { return (1 - std::cos(w * x[0])) * (1 - std::cos(w * x[1])); };
  p.exact.grad = [w](const Point& x) {
    const double X = 1 - std::cos(w * x[0]), Y = 1 - std::cos(w * x[1]);
    return V3(w * std::sin(w * x[0]) * Y, w * X * std::sin(w * x[1]), 0.0);
  };
  p.exact.hess = [w](const Point& x) {
    const double X = 1 - std::cos(w * x[0]), Y = 1 - std::cos(w * x[1]);
    M3 h = M3::Zero();
    h(0, 0) = w * w * std::cos(w * x[0]) * Y;
    h(1, 1) = w * w * X * std::cos(w * x[1]);
    h(0, 1) = h(1, 0) = w * w * std::sin(w * x[0]) * std::sin(w * x[1]);
    return h;
  };
  p.source.f = [](const Point& x) {
    const double cx = std::cos(2 * pi * x[0]), cy = std::cos(2 * pi * x[1]);
    const double p4 = pi * pi * pi * pi;
    return -16 * p4 * (cx + cy) + 64 * p4 * cx * cy;
  };
}

// Plane wave u = exp(i kappa (x + y) / sqrt2): f = 0 and
// g = du/dn - i kappa u = i kappa u ((n_x + n_y) / sqrt2 - 1).
void helmholtz_solution(Problem& p, double kappa) {
  using C = smoothsc::complex;
  const double s = kappa / std::sqrt(2.0);
  const C I(0.0, 1.0);
  p.exact_c.value = [s, I](const Point& x) { return std::exp(I * s * (x[0] + x[1])); };
  p.exact_c.grad = [s, I](const Point& x) {
    const C u = std::exp(I * s * (x[0] + x[1]));
    return Vec3<C>(I * s * u, I * s * u, C{});
  };
  p.source.fc = [](const Point&) { return C{}; };
  p.source.gc = [s, kappa, I](const Point& x, const V3& n) {
    const C u = std::exp(I * s * (x[0] + x[1]));
    return I * kappa * u * ((n[0] + n[1]) / std::sqrt(2.0) - 1.0);
  };
}

// u = phi(r) r^(2/3) sin(2 theta / 3), phi = (1 - r/0.9)^8 on r <= 0.9,
// theta in [0, 2 pi). The singular factor is harmonic, so f only involves
// derivatives of the cutoff.
void lshape_solution(Problem& p) {
  struct Polar {
    double r, t;
  };
  auto polar = [](const Point& x) {
    double t = std::atan2(x[1], x[0]);
    if (t < 0) t += 2 * pi;
    return Polar{std::hypot(x[0], x[1]), t};
  };
  auto phi = [](double r, int d) {
    if (r >= 0.9) return 0.0;
    const double s = 1 - r / 0.9;
    if (d == 0) return std::pow(s, 8);
    if (d == 1) return -(8 / 0.9) * std::pow(s, 7);
    return (56 / 0.81) * std::pow(s, 6);
  };
  p.exact.value = [=](const Point& x) {
    const Polar q = polar(x);
    return phi(q.r, 0) * std::pow(q.r, 2.0 / 3.0) * std::sin(2 * q.t / 3);
  };
  p.exact.grad = [=](const Point& x) {
    const Polar q = polar(x);
    if (q.r == 0.0 || q.r >= 0.9) return V3::Zero().eval();
    const double s = std::sin(2 * q.t / 3), c = std::cos(2 * q.t / 3);
    const double ur = phi(q.r, 1) * std::pow(q.r, 2.0 / 3.0) * s + phi(q.r, 0) * (2.0 / 3.0) * std::pow(q.r, -1.0 / 3.0) * s;
    const double ut = phi(q.r, 0) * (2.0 / 3.0) * std::pow(q.r, -1.0 / 3.0) * c;  // (1/r) du/dtheta
    const double ct = std::cos(q.t), st = std::sin(q.t);
    return V3(ur * ct - ut * st, ur * st + ut * ct, 0.0);
  };
  p.source.f = [=](const Point& x) {
    const Polar q = polar(x);
    if (q.r == 0.0 || q.r >= 0.9) return 0.0;
    const double s = std::sin(2 * q.t / 3);
    return -s * ((4.0 / 3.0) * phi(q.r, 1) * std::pow(q.r, -1.0 / 3.0) +
                 std::pow(q.r, 2.0 / 3.0) * (phi(q.r, 2) + phi(q.r, 1) / q.r));
  };
}

}  // namespace

std::string to_string(CaseId id) {
  switch (id) {
    case CaseId::poisson_hex: return "poisson_hex";
    case CaseId::poisson_square_threeline: return "poisson_square_threeline";
    case CaseId::dg_poisson: return "dg_poisson";
    case CaseId::maxwell_cube: return "maxwell_cube";
    case CaseId::biharmonic_square: return "biharmonic_square";
    case CaseId::helmholtz_square: return "helmholtz_square";
    case CaseId::poisson_gmsh: return "poisson_gmsh";
    case CaseId::maxwell_gmsh: return "maxwell_gmsh";
    case CaseId::adaptive_lshape: return "adaptive_lshape";
  }
  return "?";
}

const std::vector<CaseId>& all_cases() {
  static const std::vector<CaseId> ids{CaseId::poisson_hex,       CaseId::poisson_square_threeline,
                                      CaseId::dg_poisson,        CaseId::maxwell_cube,
                                      CaseId::biharmonic_square, CaseId::helmholtz_square,
                                      CaseId::poisson_gmsh,      CaseId::maxwell_gmsh,
                                      CaseId::adaptive_lshape};
  return ids;
}

CaseId parse_case(const std::string& name) {
  for (CaseId id : all_cases())
    if (to_string(id) == name) return id;
  throw std::invalid_argument("unknown case '" + name + "'");
}

double default_gamma(CaseId id, int k) {
  if (id == CaseId::biharmonic_square && k == 3) return 17.0;
  return 10.0;
}

Problem make_problem(CaseId id, int k, const ProblemParams& params) {
  if (k < 1) throw std::invalid_argument("make_problem: degree must be at least 1");
  Problem p;
  p.id = id;
  p.k = k;
  const double gamma = params.gamma > 0.0 ? params.gamma : default_gamma(id, k);
  switch (id) {
    case CaseId::poisson_hex:
    case CaseId::poisson_gmsh:
      p.domain = DomainId::hexagon;
      hexagon_solution(p);
      break;
    case CaseId::poisson_square_threeline:
      p.domain = DomainId::unit_square_threeline;
      sine_solution(p);
      break;
    case CaseId::dg_poisson:
      p.domain = DomainId::unit_square_threeline;
      p.family = Family::dg;
      p.dirichlet = false;
      p.form.kind = FormKind::dg_poisson;
      p.form.gamma = gamma;
      p.norm.kind = NormKind::broken_1h;
      p.norm.gamma = gamma;
      sine_solution(p);
      break;
    case CaseId::maxwell_cube:
    case CaseId::maxwell_gmsh:
      if (k > 1) throw std::invalid_argument("make_problem: Nedelec pairs are limited to Nd1-Nd2");
      p.domain = DomainId::unit_cube;
      p.dim = 3;
      p.family = Family::nedelec1;
      p.dirichlet = false;
      p.form.kind = FormKind::hcurl;
      p.norm.kind = NormKind::hcurl;
      maxwell_solution(p);
      break;
    case CaseId::biharmonic_square:
      if (k < 2) throw std::invalid_argument("make_problem: CIP pairs start at P2-P3");
      p.domain = DomainId::unit_square_threeline;
      p.form.kind = FormKind::cip_biharmonic;
      p.form.gamma = gamma;
      p.norm.kind = NormKind::cip_2h;
      p.norm.gamma = gamma;
      biharmonic_solution(p);
      break;
    case CaseId::helmholtz_square:
      p.domain = DomainId::unit_square_threeline;
      p.complex = true;
      p.dirichlet = false;
      p.form.kind = FormKind::helmholtz_robin;
      p.form.kappa = params.kappa;
      p.norm.kind = NormKind::h1_kappa;
      p.norm.kappa = params.kappa;
      helmholtz_solution(p, params.kappa);
      break;
    case CaseId::adaptive_lshape:
      p.domain = DomainId::l_shape;
      lshape_solution(p);
      break;
  }
  if (p.family == Family::lagrange && p.form.kind == FormKind::poisson_h1) p.norm.kind = NormKind::h1_semi;
  // One load rule for both spaces keeps iota^T f~ = f exact.
  p.source.quad_degree = 2 * (k + 2);
  return p;
}

std::shared_ptr<const Mesh> problem_mesh(const Problem& p, int level, const ProblemParams& params) {
  if (p.structured()) {
    if (level < 0) throw std::invalid_argument("problem_mesh: negative level");
    return std::make_shared<const Mesh>(generate_structured(p.domain, level));
  }
  if (level < 0 || static_cast<std::size_t>(level) >= params.mesh_files.size())
    throw std::invalid_argument("problem_mesh: no mesh file for level " + std::to_string(level));
  Mesh m = read_msh_file(params.mesh_files[level]);
  if (m.dim() != p.dim) throw std::invalid_argument("problem_mesh: mesh dimension does not match the case");
  return std::make_shared<const Mesh>(std::move(m));
}

double problem_h(const Problem& p, const Mesh& mesh, int level) {
  if (p.id == CaseId::adaptive_lshape) return mesh_stats(mesh).h_max;
  // Gmsh level files are generated with maximal element size 2^-level.
  if (!p.structured()) return std::ldexp(1.0, -level);
  return std::ldexp(initial_mesh_size(p.domain), -level);
}

template <class T>
double LevelSystem<T>::error_coarse() const {
  return error_norm(*coarse, u_h, exact, norm);
}

template <class T>
double LevelSystem<T>::error_fine(const Vector<T>& u) const {
  return error_norm(*fine, u, exact, norm);
}

template <class T>
LevelSystem<T> build_level(const Problem& p, std::shared_ptr<const Mesh> mesh) {
  constexpr bool is_complex = std::is_same_v<T, complex>;
  if (p.complex != is_complex) throw std::invalid_argument("build_level: scalar type does not match the problem");
  LevelSystem<T> L;
  L.mesh = mesh;
  L.coarse = std::make_shared<const DofMap>(mesh, p.space(p.k));
  L.fine = std::make_shared<const DofMap>(mesh, p.space(p.k + 1));
  L.norm = p.norm;
  if constexpr (is_complex) {
    L.exact = p.exact_c;
    L.A = assemble_matrix_complex(p.form, *L.coarse);
    L.A_fine = assemble_matrix_complex(p.form, *L.fine);
    L.f = assemble_rhs_complex(p.form, p.source, *L.coarse);
    L.f_fine = assemble_rhs_complex(p.form, p.source, *L.fine);
  } else {
    L.exact = p.exact;
    L.A = assemble_matrix(p.form, *L.coarse);
    L.A_fine = assemble_matrix(p.form, *L.fine);
    L.f = assemble_rhs(p.form, p.source, *L.coarse);
    L.f_fine = assemble_rhs(p.form, p.source, *L.fine);
  }
  L.iota = prolongation(*L.coarse, *L.fine);
  L.u_h = exact_solve(L.A, L.f);
  return L;
}

template struct LevelSystem<double>;
template struct LevelSystem<complex>;
template LevelSystem<double> build_level(const Problem&, std::shared_ptr<const Mesh>);
template LevelSystem<complex> build_level(const Problem&, std::shared_ptr<const Mesh>);

}  // namespace smoothsc
