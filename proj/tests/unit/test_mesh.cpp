#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Geometry>

#include "doctest.h"
#include "smoothsc/mesh.hpp"
#include "smoothsc/topology.hpp"
#include "test_util.hpp"

using namespace smoothsc;

namespace {

double boundary_measure(const Mesh& m) {
  const Topology topo = build_topology(m);
  double s = 0.0;
  for (std::size_t f = 0; f < topo.num_facets(); ++f) {
    if (!topo.is_boundary_facet(f)) continue;
    const FacetKey k = topo.facet_key(f);
    if (m.dim() == 2) {
      s += (m.vertex(k[0]) - m.vertex(k[1])).norm();
    } else {
      s += 0.5 * (m.vertex(k[1]) - m.vertex(k[0])).cross(m.vertex(k[2]) - m.vertex(k[0])).norm();
    }
  }
  return s;
}

void check_conforming(const Mesh& m) {
  m.validate();
  const Topology topo = build_topology(m);
  for (std::size_t f = 0; f < topo.num_facets(); ++f) CHECK(topo.facet_cells[f][0] >= 0);
}

Mesh single_triangle() { return Mesh(2, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 2, -1}}); }

}  // namespace

TEST_CASE("structured initial meshes have the documented counts") {
  const Mesh sq = generate_structured(DomainId::unit_square_threeline, 0);
  CHECK(sq.num_vertices() == 4);
  CHECK(sq.num_cells() == 2);
  const Mesh hex0 = generate_structured(DomainId::hexagon, 0);
  CHECK(hex0.num_vertices() == 7);
  CHECK(hex0.num_cells() == 6);
  const Mesh hex1 = generate_structured(DomainId::hexagon, 1);
  CHECK(hex1.num_vertices() == 19);
  CHECK(hex1.num_cells() == 24);
  const Mesh cube = generate_structured(DomainId::unit_cube, 0);
  CHECK(cube.num_vertices() == 8);
  CHECK(cube.num_cells() == 6);
  CHECK(cube.total_measure() == doctest::Approx(1.0).epsilon(1e-14));
  const Mesh l = generate_structured(DomainId::l_shape, 0);
  CHECK(l.num_cells() == 6);
  CHECK(l.total_measure() == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("Euler characteristic of the planar meshes") {
  for (auto d : {DomainId::unit_square_threeline, DomainId::hexagon, DomainId::l_shape})
    for (int level = 0; level < 4; ++level) {
      const Mesh m = generate_structured(d, level);
      const Topology t = build_topology(m);
      CHECK(static_cast<long>(m.num_vertices()) - static_cast<long>(t.edges.size()) +
                static_cast<long>(m.num_cells()) ==
            1);
    }
}

TEST_CASE("uniform refinement") {
  const Mesh sq = generate_structured(DomainId::unit_square_threeline, 0);
  const Mesh r = uniform_refine(sq);
  CHECK(r.num_vertices() == 9);
  CHECK(r.num_cells() == 8);
  CHECK(r.total_measure() == doctest::Approx(sq.total_measure()).epsilon(1e-14));

  const Mesh cube = generate_structured(DomainId::unit_cube, 0);
  const Mesh c1 = uniform_refine(cube);
  CHECK(c1.num_cells() == 48);
  double vol = 0.0;
  for (std::size_t c = 0; c < c1.num_cells(); ++c) vol += c1.cell_measure(c);
  CHECK(vol == doctest::Approx(1.0).epsilon(1e-14));
  check_conforming(c1);

  for (auto d : {DomainId::unit_square_threeline, DomainId::hexagon, DomainId::unit_cube}) {
    const int top = d == DomainId::unit_cube ? 3 : 5;
    double h_prev = mesh_stats(generate_structured(d, 0)).h_max;
    for (int level = 1; level <= top; ++level) {
      const Mesh m = generate_structured(d, level);
      const MeshStats s = mesh_stats(m);
      CHECK(s.h_max == doctest::Approx(h_prev / 2).epsilon(1e-12));
      h_prev = s.h_max;
      CHECK(m.total_measure() == doctest::Approx(generate_structured(d, 0).total_measure()).epsilon(1e-13));
    }
  }
}

TEST_CASE("3D red refinement keeps shape regularity bounded") {
  double first = 0.0;
  for (int level = 0; level <= 3; ++level) {
    const double q = mesh_stats(generate_structured(DomainId::unit_cube, level)).shape_regularity;
    if (level == 0) first = q;
    CHECK(q <= 2.0 * first);
  }
}

TEST_CASE("mesh_stats") {
  const MeshStats t = mesh_stats(single_triangle());
  CHECK(t.h_max == doctest::Approx(std::sqrt(2.0)));
  CHECK(t.h_min == doctest::Approx(1.0));
  const MeshStats h = mesh_stats(generate_structured(DomainId::hexagon, 0));
  CHECK(h.h_max == doctest::Approx(1.0));
  CHECK(h.h_min <= h.h_max);
  // Equilateral triangle: diameter / inradius = 2 sqrt(3).
  CHECK(h.shape_regularity == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-12));
  CHECK(h.num_facets == 12);
}

TEST_CASE("stats are invariant under vertex renumbering") {
  const Mesh m = generate_structured(DomainId::hexagon, 2);
  std::vector<int> perm(m.num_vertices());
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(7);
  std::shuffle(perm.begin(), perm.end(), rng);
  const Mesh r = renumber_vertices(m, perm);
  r.validate();
  const MeshStats a = mesh_stats(m), b = mesh_stats(r);
  CHECK(a.h_max == b.h_max);
  CHECK(a.h_min == b.h_min);
  CHECK(a.num_facets == b.num_facets);
  CHECK(a.shape_regularity == doctest::Approx(b.shape_regularity).epsilon(1e-14));
  CHECK(r.total_measure() == doctest::Approx(m.total_measure()).epsilon(1e-14));
}

TEST_CASE("newest vertex bisection") {
  const Mesh sq = generate_structured(DomainId::unit_square_threeline, 0);
  SUBCASE("empty marking returns the same mesh") {
    const Mesh r = bisect(sq, std::vector<int>{});
    CHECK(r.num_cells() == sq.num_cells());
    CHECK(r.vertices() == sq.vertices());
  }
  SUBCASE("marking one triangle of the square bisects the neighbor too") {
    const Mesh r = bisect(sq, std::vector<int>{0});
    CHECK(r.num_cells() == 4);
    CHECK(r.num_vertices() == 5);
    check_conforming(r);
  }
  SUBCASE("3D meshes are rejected") {
    CHECK_THROWS_AS(bisect(generate_structured(DomainId::unit_cube, 0), std::vector<int>{0}), std::invalid_argument);
  }
}

TEST_CASE("NVB conformity over 20 random marking rounds") {
  std::mt19937_64 rng(2024);
  for (auto d : {DomainId::unit_square_threeline, DomainId::l_shape, DomainId::hexagon}) {
    Mesh m = generate_structured(d, 1);
    const double area = m.total_measure();
    const double perimeter = boundary_measure(m);
    for (int round = 0; round < 20; ++round) {
      std::vector<int> marked;
      std::bernoulli_distribution pick(0.15);
      for (std::size_t c = 0; c < m.num_cells(); ++c)
        if (pick(rng)) marked.push_back(static_cast<int>(c));
      if (marked.empty()) marked.push_back(0);
      const std::size_t before = m.num_cells();
      m = bisect(m, marked);
      CHECK(m.num_cells() >= before + marked.size());
      check_conforming(m);
      CHECK(m.has_nvb_state());
      CHECK(m.total_measure() == doctest::Approx(area).epsilon(1e-13));
      // A hanging node would turn an interior edge piece into a boundary facet.
      CHECK(boundary_measure(m) == doctest::Approx(perimeter).epsilon(1e-12));
    }
  }
}

TEST_CASE("repeated global bisection keeps shape regularity bounded") {
  Mesh m = generate_structured(DomainId::unit_square_threeline, 0);
  const double q0 = mesh_stats(m).shape_regularity;
  for (int round = 0; round < 20; ++round) {
    std::vector<int> all(m.num_cells());
    std::iota(all.begin(), all.end(), 0);
    m = bisect(m, all);
    if (m.num_cells() > 200000) break;
    CHECK(mesh_stats(m).shape_regularity <= 2.0 * q0 + 1e-12);
  }
}

TEST_CASE("mesh text dump round trip") {
  const Mesh m = generate_structured(DomainId::unit_cube, 1);
  std::stringstream ss;
  write_mesh(ss, m);
  const Mesh r = read_mesh(ss);
  CHECK(r.dim() == 3);
  CHECK(r.cells() == m.cells());
  CHECK(r.vertices() == m.vertices());
}

TEST_CASE("validate rejects bad meshes") {
  CHECK_THROWS(Mesh(2, {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, {{0, 1, 2, -1}}).validate());
  CHECK_THROWS_AS(Mesh(4, {}, {}), std::invalid_argument);
  // Hanging node: one big triangle next to two halves.
  const Mesh hanging(2, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0.5, 0.5, 0}},
                     {{0, 1, 2, -1}, {1, 3, 4, -1}, {2, 3, 4, -1}});
  CHECK_THROWS(hanging.validate());
}
