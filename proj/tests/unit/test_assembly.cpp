#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>
#include <random>

#include "doctest.h"
#include "smoothsc/assembly.hpp"
#include "smoothsc/error_norms.hpp"
#include "smoothsc/fe_function.hpp"
#include "smoothsc/problems.hpp"
#include "smoothsc/solvers.hpp"
#include "test_util.hpp"

using namespace smoothsc;
using test::random_vector;

namespace {

constexpr double pi = 3.14159265358979323846;

std::shared_ptr<const Mesh> mesh_of(DomainId d, int level) {
  return std::make_shared<const Mesh>(generate_structured(d, level));
}

template <class F>
auto fd_laplacian(F&& u, const Point& x, double h = 1e-3) {
  auto s = -4.0 * u(x);
  for (int d = 0; d < 2; ++d) {
    Point a = x, b = x;
    a[d] += h;
    b[d] -= h;
    s += u(a) + u(b);
  }
  return s / (h * h);
}

// Central difference of a vector field along axis d.
template <class F>
Eigen::Vector3d fd_partial(F&& u, const Point& x, int d, double h = 1e-5) {
  Point a = x, b = x;
  a[d] += h;
  b[d] -= h;
  return (u(a) - u(b)) / (2 * h);
}

template <class F>
Eigen::Vector3d fd_curl(F&& u, const Point& x) {
  const Eigen::Vector3d dx = fd_partial(u, x, 0), dy = fd_partial(u, x, 1), dz = fd_partial(u, x, 2);
  return {dy[2] - dz[1], dz[0] - dx[2], dx[1] - dy[0]};
}

template <class F>
Eigen::Vector3d fd_grad(F&& u, const Point& x, double h = 1e-6) {
  Eigen::Vector3d g;
  for (int d = 0; d < 3; ++d) {
    Point a = x, b = x;
    a[d] += h;
    b[d] -= h;
    g[d] = (u(a) - u(b)) / (2 * h);
  }
  return g;
}

std::vector<Point> sample_points(int n, double lo, double hi, std::mt19937_64& rng, int dim = 2) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) pts.emplace_back(u(rng), u(rng), dim == 3 ? u(rng) : 0.0);
  return pts;
}

}  // namespace

TEST_CASE("P1 on the three-line square at h = 1/2") {
  auto m = mesh_of(DomainId::unit_square_threeline, 1);
  const DofMap dm(m, {Family::lagrange, 1, 2, false, true});
  REQUIRE(dm.num_free() == 1);
  const CsrMatrix<double> A = assemble_matrix(FormSpec{}, dm);
  CHECK(A(0, 0) == doctest::Approx(4.0).epsilon(1e-14));
  SourceData one;
  one.f = [](const Point&) { return 1.0; };
  const Vector<double> b = assemble_rhs(FormSpec{}, one, dm);
  CHECK(b[0] == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("Lagrange stiffness: symmetric with constants in the kernel") {
  auto m = mesh_of(DomainId::hexagon, 1);
  for (int k = 1; k <= 5; ++k) {
    const DofMap dm(m, {Family::lagrange, k, 2, false, false});
    const CsrMatrix<double> A = assemble_matrix(FormSpec{}, dm);
    const Vector<double> r = A * Vector<double>(dm.num_free(), 1.0);
    CHECK(norm2(r) < 1e-11 * A.max_abs());
    CHECK((A.to_dense() - A.to_dense().transpose()).norm() < 1e-12 * A.max_abs());
  }
  auto cube = mesh_of(DomainId::unit_cube, 1);
  const DofMap dm(cube, {Family::lagrange, 3, 3, false, false});
  const Vector<double> r = assemble_matrix(FormSpec{}, dm) * Vector<double>(dm.num_free(), 1.0);
  CHECK(norm2(r) < 1e-11);
}

TEST_CASE("H(curl) matrix is symmetric positive definite") {
  auto m = mesh_of(DomainId::unit_cube, 0);
  for (int k = 1; k <= 2; ++k) {
    const DofMap dm(m, {Family::nedelec1, k, 3, false, false});
    FormSpec f;
    f.kind = FormKind::hcurl;
    const Eigen::MatrixXd D = assemble_matrix(f, dm).to_dense();
    CHECK((D - D.transpose()).norm() < 1e-12 * D.norm());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D);
    CHECK(es.eigenvalues().minCoeff() > 1e-6);
  }
}

TEST_CASE("DG form is coercive in the broken norm") {
  std::mt19937_64 rng(23);
  auto m = mesh_of(DomainId::unit_square_threeline, 2);
  for (int k = 1; k <= 3; ++k) {
    const DofMap dm(m, {Family::dg, k, 2, false, false});
    FormSpec f;
    f.kind = FormKind::dg_poisson;
    f.gamma = 10.0;
    const CsrMatrix<double> A = assemble_matrix(f, dm);
    const Eigen::MatrixXd D = A.to_dense();
    CHECK((D - D.transpose()).norm() < 1e-12 * D.norm());
    ExactSolution<double> zero;
    zero.value = [](const Point&) { return 0.0; };
    zero.grad = [](const Point&) { return Eigen::Vector3d::Zero().eval(); };
    NormSpec ns;
    ns.kind = NormKind::broken_1h;
    ns.gamma = f.gamma;
    for (int i = 0; i < 10; ++i) {
      const Vector<double> v = random_vector(dm.num_free(), rng);
      const double energy = dot(A * v, v);
      const double broken = error_norm(dm, v, zero, ns);
      CHECK(energy >= 0.1 * broken * broken);
    }
  }
}

TEST_CASE("Galerkin solution reproduces a polynomial in the space") {
  // u = x(1-x)y(1-y) has degree 4 and vanishes on the boundary.
  auto m = mesh_of(DomainId::unit_square_threeline, 1);
  const DofMap dm(m, {Family::lagrange, 4, 2, false, true});
  auto u = [](const Point& x) { return x[0] * (1 - x[0]) * x[1] * (1 - x[1]); };
  SourceData src;
  src.f = [](const Point& x) { return 2 * x[1] * (1 - x[1]) + 2 * x[0] * (1 - x[0]); };
  const CsrMatrix<double> A = assemble_matrix(FormSpec{}, dm);
  const Vector<double> uh = exact_solve(A, assemble_rhs(FormSpec{}, src, dm), 1e-14);
  const Vector<double> ui = interpolate<double>(dm, u);
  CHECK(norm2(uh - ui) < 1e-11);
}

TEST_CASE("error norms") {
  SUBCASE("interpolants of polynomials have zero error") {
    auto m = mesh_of(DomainId::hexagon, 1);
    for (int k = 1; k <= 4; ++k) {
      const DofMap dm(m, {Family::lagrange, k, 2, false, false});
      ExactSolution<double> ex;
      ex.value = [k](const Point& x) { return std::pow(x[0] - 0.5 * x[1], k); };
      ex.grad = [k](const Point& x) {
        const double d = k * std::pow(x[0] - 0.5 * x[1], k - 1);
        return Eigen::Vector3d(d, -0.5 * d, 0.0);
      };
      const Vector<double> c = interpolate<double>(dm, ex.value);
      CHECK(error_norm(dm, c, ex, NormSpec{NormKind::l2}) < 1e-13);
      CHECK(error_norm(dm, c, ex, NormSpec{NormKind::h1_semi}) < 1e-12);
    }
  }
  SUBCASE("x^2 against the zero function on the reference triangle") {
    auto m = std::make_shared<const Mesh>(Mesh(2, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 2, -1}}));
    const DofMap dm(m, {Family::lagrange, 1, 2, false, false});
    ExactSolution<double> ex;
    ex.value = [](const Point& x) { return x[0] * x[0]; };
    ex.grad = [](const Point& x) { return Eigen::Vector3d(2 * x[0], 0, 0); };
    const Vector<double> zero(dm.num_free(), 0.0);
    // int x^4 = 4!/6! = 1/30 and int 4x^2 = 4 * 2!/4! = 1/3.
    CHECK(error_norm(dm, zero, ex, NormSpec{NormKind::l2}) == doctest::Approx(std::sqrt(1.0 / 30)).epsilon(1e-14));
    CHECK(error_norm(dm, zero, ex, NormSpec{NormKind::h1_semi}) ==
          doctest::Approx(std::sqrt(1.0 / 3)).epsilon(1e-14));
  }
  SUBCASE("cell seminorms add up to the global seminorm") {
    std::mt19937_64 rng(29);
    auto m = mesh_of(DomainId::l_shape, 1);
    const DofMap dm(m, {Family::lagrange, 2, 2, false, false});
    const Vector<double> v = random_vector(dm.num_free(), rng);
    double s = 0.0;
    for (double e : cell_h1_seminorms(dm, v)) s += e * e;
    CHECK(s == doctest::Approx(dot(assemble_matrix(FormSpec{}, dm) * v, v)).epsilon(1e-12));
  }
}

TEST_CASE("manufactured sources match finite differences of the exact solutions") {
  std::mt19937_64 rng(31);
  SUBCASE("hexagon polynomial") {
    const Problem p = make_problem(CaseId::poisson_hex, 1);
    for (const Point& x : sample_points(10, -0.4, 0.4, rng)) {
      CHECK(-fd_laplacian(p.exact.value, x) == doctest::Approx(p.source.f(x)).epsilon(1e-5));
      CHECK((fd_grad(p.exact.value, x) - p.exact.grad(x)).norm() < 1e-6);
    }
  }
  SUBCASE("sine on the square") {
    const Problem p = make_problem(CaseId::poisson_square_threeline, 1);
    for (const Point& x : sample_points(10, 0.1, 0.9, rng)) {
      CHECK(-fd_laplacian(p.exact.value, x) == doctest::Approx(p.source.f(x)).epsilon(1e-5));
      CHECK((fd_grad(p.exact.value, x) - p.exact.grad(x)).norm() < 1e-6);
    }
  }
  SUBCASE("Maxwell: curl curl u + u = f") {
    const Problem p = make_problem(CaseId::maxwell_cube, 1);
    for (const Point& x : sample_points(10, 0.1, 0.9, rng, 3)) {
      CHECK((fd_curl(p.exact.vec, x) - p.exact.curl(x)).norm() < 1e-7);
      const Eigen::Vector3d lhs = fd_curl(p.exact.curl, x) + p.exact.vec(x);
      CHECK((lhs - p.source.fvec(x)).norm() < 1e-6 * p.source.fvec(x).norm() + 1e-8);
    }
  }
  SUBCASE("biharmonic: Delta^2 u = f") {
    const Problem p = make_problem(CaseId::biharmonic_square, 2);
    auto lap = [&](const Point& x) { return p.exact.hess(x).trace(); };
    for (const Point& x : sample_points(10, 0.1, 0.9, rng)) {
      CHECK(fd_laplacian(lap, x) == doctest::Approx(p.source.f(x)).epsilon(1e-4));
      CHECK(lap(x) == doctest::Approx(fd_laplacian(p.exact.value, x)).epsilon(1e-5));
      for (int d = 0; d < 2; ++d) {
        auto gd = [&](const Point& y) { return p.exact.grad(y)[d]; };
        CHECK((fd_grad(gd, x) - p.exact.hess(x).col(d)).norm() < 1e-5);
      }
    }
  }
  SUBCASE("Helmholtz plane wave: -Delta u - kappa^2 u = 0 and the Robin datum") {
    const double kappa = 3 * pi;
    ProblemParams prm;
    prm.kappa = kappa;
    const Problem p = make_problem(CaseId::helmholtz_square, 1, prm);
    for (const Point& x : sample_points(10, 0.1, 0.9, rng)) {
      const complex r = -fd_laplacian(p.exact_c.value, x) - kappa * kappa * p.exact_c.value(x);
      CHECK(std::abs(r) < 1e-4 * kappa * kappa);
      CHECK(std::abs(p.source.fc(x)) == 0.0);
    }
    const complex I(0, 1);
    for (const auto& [x, n] : {std::pair{Point(0.3, 0, 0), Eigen::Vector3d(0, -1, 0)},
                               std::pair{Point(1, 0.7, 0), Eigen::Vector3d(1, 0, 0)},
                               std::pair{Point(0.2, 1, 0), Eigen::Vector3d(0, 1, 0)},
                               std::pair{Point(0, 0.4, 0), Eigen::Vector3d(-1, 0, 0)}}) {
      const Vec3<complex> g = p.exact_c.grad(x);
      const complex robin = g[0] * n[0] + g[1] * n[1] - I * kappa * p.exact_c.value(x);
      CHECK(std::abs(robin - p.source.gc(x, n)) < 1e-12 * kappa);
    }
  }
  SUBCASE("L-shape cutoff singular solution") {
    const Problem p = make_problem(CaseId::adaptive_lshape, 1);
    std::uniform_real_distribution<double> r(0.15, 0.8), t(0.2, 4.5);
    for (int i = 0; i < 10; ++i) {
      const double rr = r(rng), tt = t(rng);
      const Point x(rr * std::cos(tt), rr * std::sin(tt), 0.0);
      CHECK(-fd_laplacian(p.exact.value, x, 1e-4) == doctest::Approx(p.source.f(x)).epsilon(1e-4).scale(1.0));
      CHECK((fd_grad(p.exact.value, x) - p.exact.grad(x)).norm() < 1e-6);
    }
    // Homogeneous Dirichlet data on both re-entrant edges.
    CHECK(std::abs(p.exact.value(Point(0.5, 0, 0))) < 1e-14);
    CHECK(std::abs(p.exact.value(Point(0, -0.5, 0))) < 1e-14);
  }
}

TEST_CASE("Helmholtz matrix is complex symmetric, not Hermitian") {
  ProblemParams prm;
  prm.kappa = 2 * pi;
  const Problem p = make_problem(CaseId::helmholtz_square, 1, prm);
  const DofMap dm(problem_mesh(p, 2, prm), p.space(1));
  const Eigen::MatrixXcd A = assemble_matrix_complex(p.form, dm).to_dense();
  CHECK((A - A.transpose()).norm() < 1e-12 * A.norm());
  CHECK((A - A.adjoint()).norm() > 1e-3 * A.norm());
}

TEST_CASE("nested spaces: iota^T A~ iota = A and iota^T f~ = f") {
  std::mt19937_64 rng(37);
  for (auto [id, k] : {std::pair{CaseId::poisson_hex, 1}, std::pair{CaseId::poisson_hex, 2},
                       std::pair{CaseId::maxwell_cube, 1}}) {
    const Problem p = make_problem(id, k);
    const LevelSystem<double> L = build_level<double>(p, problem_mesh(p, 1));
    const Vector<double> rf = L.iota.transpose_multiply(L.f_fine);
    CHECK(norm2(rf - L.f) <= 1e-12 * norm2(L.f));
    for (int i = 0; i < 5; ++i) {
      const Vector<double> v = random_vector(L.A.cols(), rng);
      const Vector<double> lhs = L.iota.transpose_multiply(L.A_fine * (L.iota * v));
      CHECK(norm2(lhs - L.A * v) <= 1e-12 * norm2(L.A * v));
    }
  }
}
