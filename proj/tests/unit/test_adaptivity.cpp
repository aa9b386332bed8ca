#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "doctest.h"
#include "smoothsc/adaptivity.hpp"
#include "smoothsc/experiment.hpp"
#include "smoothsc/fe_function.hpp"
#include "test_util.hpp"

using namespace smoothsc;

namespace {

double sum_sq(std::span<const double> v, const std::vector<int>& idx) {
  double s = 0.0;
  for (int i : idx) s += v[i] * v[i];
  return s;
}

}  // namespace

TEST_CASE("estimate") {
  SUBCASE("equal functions give zero") {
    auto m = std::make_shared<const Mesh>(generate_structured(DomainId::l_shape, 1));
    const DofMap dm(m, {Family::lagrange, 2, 2, false, true});
    std::mt19937_64 rng(89);
    const Vector<double> v = test::random_vector(dm.num_free(), rng);
    const Estimate e = estimate(dm, v, v);
    CHECK(e.eta == 0.0);
    CHECK(e.cell.size() == m->num_cells());
  }
  SUBCASE("linear difference on one triangle") {
    auto m = std::make_shared<const Mesh>(Mesh(2, {{0, 0, 0}, {2, 0, 0}, {0, 1, 0}}, {{0, 1, 2, -1}}));
    const DofMap dm(m, {Family::lagrange, 2, 2, false, false});
    const Vector<double> x = interpolate<double>(dm, [](const Point& p) { return p[0]; });
    const Estimate e = estimate(dm, Vector<double>(dm.num_free(), 0.0), x);
    CHECK(e.eta == doctest::Approx(1.0).epsilon(1e-14));  // sqrt(|T|), |T| = 1
    CHECK(e.cell[0] == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("global value is the root sum of squares and survives renumbering") {
    const Mesh base = generate_structured(DomainId::hexagon, 2);
    auto fn = [](const Point& p) { return std::sin(p[0]) * p[1] + p[0] * p[0]; };
    auto eta_of = [&](const Mesh& mesh) {
      auto m = std::make_shared<const Mesh>(mesh);
      const DofMap dm(m, {Family::lagrange, 2, 2, false, false});
      return estimate(dm, Vector<double>(dm.num_free(), 0.0), interpolate<double>(dm, fn));
    };
    const Estimate a = eta_of(base);
    double s = 0.0;
    for (double c : a.cell) s += c * c;
    CHECK(a.eta == doctest::Approx(std::sqrt(s)).epsilon(1e-12));
    std::vector<int> perm(base.num_vertices());
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(97);
    std::shuffle(perm.begin(), perm.end(), rng);
    CHECK(eta_of(renumber_vertices(base, perm)).eta == doctest::Approx(a.eta).epsilon(1e-12));
  }
}

TEST_CASE("Dorfler marking examples") {
  CHECK(dorfler_mark(std::vector<double>{3, 2, 1}, 0.5) == std::vector<int>{0});
  CHECK(dorfler_mark(std::vector<double>{1, 1, 1, 1}, 0.5) == std::vector<int>{0});
  CHECK(dorfler_mark(std::vector<double>{1, 3, 2}, 0.5) == std::vector<int>{1});
  CHECK(dorfler_mark(std::vector<double>{1, 0, 2, 0}, 1.0) == std::vector<int>{0, 2});
  CHECK(dorfler_mark(std::vector<double>{0, 0}, 0.5).empty());
  CHECK(dorfler_mark(std::vector<double>{}, 0.5).empty());
  CHECK_THROWS(dorfler_mark(std::vector<double>{1, 2}, 0.0));
  CHECK_THROWS(dorfler_mark(std::vector<double>{1, 2}, 1.5));
  CHECK_THROWS(dorfler_mark(std::vector<double>{1, -2}, 0.5));
}

TEST_CASE("Dorfler marking is minimal on random indicator sets") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int round = 0; round < 200; ++round) {
    const int n = 1 + static_cast<int>(rng() % 60);
    std::vector<double> eta(n);
    for (auto& e : eta) e = std::pow(u(rng), 3);
    const double theta = 0.05 + 0.95 * u(rng);
    const std::vector<int> M = dorfler_mark(eta, theta);
    const double total = sum_sq(eta, [&] {
      std::vector<int> all(n);
      std::iota(all.begin(), all.end(), 0);
      return all;
    }());
    CHECK(std::is_sorted(M.begin(), M.end()));
    CHECK(sum_sq(eta, M) >= theta * theta * total * (1 - 1e-12));
    // Dropping the smallest marked indicator breaks the bulk criterion.
    std::vector<int> fewer = M;
    auto smallest = std::min_element(fewer.begin(), fewer.end(), [&](int a, int b) { return eta[a] < eta[b]; });
    fewer.erase(smallest);
    CHECK(sum_sq(eta, fewer) < theta * theta * total);
    // No smaller set exists: the |M|-1 largest indicators are not enough either.
    std::vector<double> sorted = eta;
    std::sort(sorted.rbegin(), sorted.rend());
    double top = 0.0;
    for (std::size_t i = 0; i + 1 < M.size(); ++i) top += sorted[i] * sorted[i];
    CHECK(top < theta * theta * total);
  }
}

TEST_CASE("adaptive loop on a smooth problem") {
  const Problem p = make_problem(CaseId::poisson_square_threeline, 1);
  AdaptConfig cfg;
  cfg.max_iters = 15;
  const auto recs = adapt_loop(p, cfg);
  REQUIRE(recs.size() == 15);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(recs[i].iter == static_cast<int>(i) + 1);
    if (i > 0) CHECK(recs[i].ndof >= recs[i - 1].ndof);  // boundary bisections add no free vertex
    CHECK(recs[i].effectivity == doctest::Approx(recs[i].eta / recs[i].err_u).epsilon(1e-12));
  }
  INFO("final effectivity ", recs.back().effectivity);
  CHECK(recs.back().effectivity >= 0.95);
  CHECK(recs.back().effectivity <= 1.05);
  CHECK(recs.back().err_rm < recs.back().err_u);

  std::ostringstream a, b;
  write_adapt_csv(a, recs);
  write_adapt_csv(b, adapt_loop(p, cfg));
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("iter,ndof,eta,err_u,err_Rm,effectivity\n", 0) == 0);
}

TEST_CASE("adaptive loop preconditions") {
  AdaptConfig cfg;
  cfg.max_iters = 1;
  CHECK_THROWS(adapt_loop(make_problem(CaseId::maxwell_cube, 1), cfg));
  CHECK_THROWS(adapt_loop(make_problem(CaseId::adaptive_lshape, 2), cfg));  // k mismatch
  cfg.theta = 0.0;
  CHECK_THROWS(adapt_loop(make_problem(CaseId::adaptive_lshape, 1), cfg));
}
