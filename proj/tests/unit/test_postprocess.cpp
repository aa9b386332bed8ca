#include <Eigen/Dense>
#include <random>

#include "doctest.h"
#include "smoothsc/experiment.hpp"
#include "smoothsc/krylov.hpp"
#include "smoothsc/postprocess.hpp"
#include "smoothsc/smoothers.hpp"
#include "smoothsc/solvers.hpp"
#include "test_util.hpp"

using namespace smoothsc;

namespace {

// Brute-force max over a uniform grid of [0, 1].
double grid_max(double a, double b, int n = 1000000) {
  double best = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    best = std::max(best, std::pow(t, a) * std::pow(1 - t, b));
  }
  return best;
}

struct Setup {
  Problem p;
  LevelSystem<double> L;
  Vector<double> fine;  // enriched solution
  Vector<double> u0;    // iota u_h
};

Setup setup(CaseId id, int k, int level) {
  Problem p = make_problem(id, k);
  LevelSystem<double> L = build_level<double>(p, problem_mesh(p, level));
  Vector<double> fine = exact_solve(L.A_fine, L.f_fine, 1e-14);
  Vector<double> u0 = L.iota * L.u_h;
  return {std::move(p), std::move(L), std::move(fine), std::move(u0)};
}

}  // namespace

TEST_CASE("f_factor") {
  CHECK(f_factor(1, 1) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(f_factor(0, 3.5) == 1.0);
  CHECK(f_factor(2, 0) == 1.0);
  CHECK(f_factor(2, 0.5) == doctest::Approx(4 * std::sqrt(0.5) / std::pow(2.5, 2.5)).epsilon(1e-14));
  CHECK(f_factor(2, 0.5) == doctest::Approx(0.286217).epsilon(1e-6));
  for (auto [a, b] : {std::pair{2.0, 0.5}, std::pair{1.0, 0.5}, std::pair{3.0, 0.5}, std::pair{0.7, 2.2},
                      std::pair{4.0, 1.0}}) {
    INFO("alpha=", a, " beta=", b);
    CHECK(std::abs(f_factor(a, b) - grid_max(a, b)) < 1e-6);
  }
}

TEST_CASE("epsilon_fixed") {
  CHECK(epsilon_fixed(0, 3.0) == 1.0);
  CHECK(epsilon_fixed(1, 5.0) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(epsilon_fixed(1, 2.0) == doctest::Approx(0.544331).epsilon(1e-6));
  // Equality m = (d - 1) / 2 takes the first branch.
  CHECK(epsilon_fixed(2, 5.0) == doctest::Approx(std::pow(0.8, 2)).epsilon(1e-15));
  CHECK_THROWS(epsilon_fixed(1, 1.0));
  CHECK_THROWS(epsilon_fixed(-1, 3.0));
  for (double d : {1.5, 2.0, 3.0, 7.0, 20.0}) {
    double prev = 2.0;
    for (int m = 0; m <= 30; ++m) {
      const double e = epsilon_fixed(m, d);
      CHECK(e <= prev + 1e-15);
      prev = e;
      // Grid oracle for the second branch.
      if (m > (d - 1) / 2) CHECK(std::abs(e - std::sqrt(d) * grid_max(m, 0.5, 200000)) < 1e-6);
    }
  }
}

TEST_CASE("epsilon_pcg") {
  CHECK(epsilon_pcg(0, 1, 1) == 1.0);
  CHECK(epsilon_pcg(1, 1, 1) == doctest::Approx(1.0 / 3));
  CHECK(epsilon_pcg(4, 1, 9) == doctest::Approx(1.0 / 3));
  CHECK_THROWS(epsilon_pcg(1, 0, 1));
  CHECK_THROWS(epsilon_pcg(1, 1, -1));
}

TEST_CASE("method names") {
  CHECK(parse_method("fp") == Method::fixed_point);
  CHECK(parse_method("fixed_point") == Method::fixed_point);
  CHECK(parse_method("pcg") == Method::pcg);
  CHECK(parse_method("gmres") == Method::gmres);
  CHECK_THROWS(parse_method("bicg"));
}

TEST_CASE("postprocessing on the three-line square") {
  const Setup s = setup(CaseId::poisson_square_threeline, 1, 2);
  const auto& L = s.L;
  SUBCASE("m = 0 returns the prolongated solution") {
    const IdentityOperator<double> I(L.A_fine.rows());
    for (Method meth : {Method::fixed_point, Method::pcg}) {
      const Vector<double> r = smooth_postprocess(L.u_h, {meth, 0}, L.A_fine, L.f_fine, L.iota, I);
      CHECK(r == s.u0);
    }
  }
  SUBCASE("one exact correction gives the enriched solution") {
    const auto inv = inverse_operator(L.A_fine, 1e-14);
    const Vector<double> r = smooth_postprocess(L.u_h, {Method::fixed_point, 1}, L.A_fine, L.f_fine, L.iota, inv);
    CHECK(norm2(r - s.fine) <= 1e-10 * norm2(s.fine));
  }
  SUBCASE("fixed-point error equals (I - SA)^2 applied to the initial error") {
    const Smoother<double> S(SmootherSpec::point(SmootherKind::gs_symmetric), L.A_fine);
    const Vector<double> r = smooth_postprocess(L.u_h, {Method::fixed_point, 2}, L.A_fine, L.f_fine, L.iota, S);
    const Eigen::MatrixXd A = L.A_fine.to_dense();
    const Eigen::MatrixXd E = Eigen::MatrixXd::Identity(A.rows(), A.cols()) - to_dense(S) * A;
    const Vector<double> e0 = s.fine - s.u0;
    const Eigen::VectorXd expect = E * E * Eigen::Map<const Eigen::VectorXd>(e0.data(), e0.size());
    const Vector<double> got = s.fine - r;
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - expect[i]) < 1e-10);
  }
  SUBCASE("Galerkin residual restricts to zero") {
    const Vector<double> res = L.f_fine - L.A_fine * s.u0;
    CHECK(norm2(L.iota.transpose_multiply(res)) <= 1e-10 * norm2(L.f_fine));
  }
  SUBCASE("sequence has m + 1 entries ending in R_m u_h") {
    const Smoother<double> S(SmootherSpec::jacobi(2.0 / 3.0), L.A_fine);
    const auto seq = smooth_postprocess_sequence(L.u_h, {Method::fixed_point, 4}, L.A_fine, L.f_fine, L.iota, S);
    CHECK(seq.size() == 5);
    CHECK(seq.back() == smooth_postprocess(L.u_h, {Method::fixed_point, 4}, L.A_fine, L.f_fine, L.iota, S));
    CHECK_THROWS(smooth_postprocess(L.u_h, {Method::fixed_point, -1}, L.A_fine, L.f_fine, L.iota, S));
  }
}

TEST_CASE("smoothing decay") {
  const Setup s = setup(CaseId::poisson_square_threeline, 1, 3);
  const auto& L = s.L;
  const Smoother<double> S(SmootherSpec::point(SmootherKind::gs_symmetric), L.A_fine);
  const auto fp = smoothing_decay(L.A_fine, L.f_fine, s.u0, s.fine, S, Method::fixed_point, 12);
  const auto cg = smoothing_decay(L.A_fine, L.f_fine, s.u0, s.fine, S, Method::pcg, 12);
  REQUIRE(fp.size() == 13);
  CHECK(fp[0] == 1.0);
  CHECK(cg[0] == 1.0);
  for (std::size_t k = 1; k < fp.size(); ++k) {
    CHECK(fp[k] <= fp[k - 1] * (1 + 1e-12));
    CHECK(cg[k] <= cg[k - 1] * (1 + 1e-12));
    CHECK(cg[k] <= fp[k] * (1 + 1e-10));
  }
}

TEST_CASE("measured contraction obeys the smoothing-rate bounds") {
  struct Case {
    CaseId id;
    int k, level;
  };
  for (const Case& c : {Case{CaseId::poisson_hex, 1, 3}, Case{CaseId::poisson_hex, 2, 2},
                        Case{CaseId::poisson_square_threeline, 1, 4}}) {
    const Setup s = setup(c.id, c.k, c.level);
    const auto& L = s.L;
    const Vector<double> e0 = s.fine - s.u0;
    const double a0 = energy_norm(L.A_fine, e0);
    for (const char* name : {"sgs", "block_gs"}) {
      const SmootherSpec spec = make_smoother_spec(resolve_smoother(name, 1.0), s.p, L);
      const Smoother<double> S(spec, L.A_fine);
      const double lambda = lambda_max(S, L.A_fine, 200, 3).lambda;
      REQUIRE(lambda <= 1.0 + 1e-8);
      const double delta = measure_delta(L.A_fine, S, e0);
      REQUIRE(delta > 1.0);
      const auto fp = smooth_postprocess_sequence(L.u_h, {Method::fixed_point, 4}, L.A_fine, L.f_fine, L.iota, S);
      const auto cg = smooth_postprocess_sequence(L.u_h, {Method::pcg, 4}, L.A_fine, L.f_fine, L.iota, S);
      for (int m = 1; m <= 4; ++m) {
        INFO(to_string(c.id), " ", name, " m=", m, " delta=", delta, " lambda=", lambda);
        const double rfp = energy_norm(L.A_fine, s.fine - fp[m]) / a0;
        const double rcg = energy_norm(L.A_fine, s.fine - cg[m]) / a0;
        CHECK(rfp <= epsilon_fixed(m, delta) * (1 + 1e-8));
        CHECK(rcg <= epsilon_pcg(m, lambda, delta) * (1 + 1e-8));
        CHECK(rfp <= 1.0);
        CHECK(rcg <= rfp * (1 + 1e-10));
      }
    }
  }
}

TEST_CASE("complex GMRES postprocessing") {
  const Problem p = make_problem(CaseId::helmholtz_square, 1);
  const LevelSystem<complex> L = build_level<complex>(p, problem_mesh(p, 2));
  const JacobiOperator<complex> M(L.A_fine);
  const auto seq = smooth_postprocess_sequence(L.u_h, {Method::gmres, 4}, L.A_fine, L.f_fine, L.iota, M);
  REQUIRE(seq.size() == 5);
  CHECK(seq[0] == apply_real(L.iota, L.u_h));
  // Preconditioned residuals are non-increasing.
  double prev = norm2(M(L.f_fine - L.A_fine * seq[0]));
  for (int m = 1; m <= 4; ++m) {
    const double r = norm2(M(L.f_fine - L.A_fine * seq[m]));
    CHECK(r <= prev * (1 + 1e-10));
    prev = r;
  }
  CHECK_THROWS(smooth_postprocess(L.u_h, {Method::pcg, 2}, L.A_fine, L.f_fine, L.iota, M));
}
