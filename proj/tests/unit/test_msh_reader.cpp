#include <sstream>

#include "doctest.h"
#include "smoothsc/msh_reader.hpp"

using namespace smoothsc;

namespace {

const std::string fixture(const std::string& name) { return std::string(SMOOTHSC_FIXTURES) + "/" + name; }

MshErrorCode error_code(const std::string& text) {
  std::istringstream in(text);
  try {
    read_msh(in);
  } catch (const MshError& e) {
    return e.code();
  }
  FAIL("expected an MshError");
  return MshErrorCode::malformed_header;
}

}  // namespace

TEST_CASE("v2.2 fixture: 4 nodes, 2 triangles") {
  const Mesh m = read_msh_file(fixture("square_v22.msh"));
  CHECK(m.dim() == 2);
  CHECK(m.num_vertices() == 4);
  CHECK(m.num_cells() == 2);
  CHECK(m.total_measure() == doctest::Approx(1.0));
  CHECK(m.boundary_tags().size() == 4);
  for (const auto& [facet, tag] : m.boundary_tags()) CHECK(tag == 1);
  m.validate();
}

TEST_CASE("v4.1 fixture describes the same mesh as the v2.2 fixture") {
  const Mesh a = read_msh_file(fixture("square_v22.msh"));
  const Mesh b = read_msh_file(fixture("square_v41.msh"));
  CHECK(a.vertices() == b.vertices());
  CHECK(a.cells() == b.cells());
  CHECK(a.boundary_tags() == b.boundary_tags());
}

TEST_CASE("Gmsh-generated files") {
  const Mesh hex = read_msh_file(fixture("gmsh_hexagon_L1.msh"));
  CHECK(hex.dim() == 2);
  CHECK(hex.total_measure() == doctest::Approx(1.5 * std::sqrt(3.0)).epsilon(1e-12));
  hex.validate();
  const Mesh cube = read_msh_file(fixture("gmsh_cube_L1.msh"));
  CHECK(cube.dim() == 3);
  CHECK(cube.total_measure() == doctest::Approx(1.0).epsilon(1e-12));
  cube.validate();
}

TEST_CASE("error codes") {
  CHECK(error_code("garbage\n") == MshErrorCode::malformed_header);
  CHECK(error_code("$MeshFormat\n4.1 1 8\n$EndMeshFormat\n") == MshErrorCode::binary_file);
  CHECK(error_code("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n4\n1 0 0 0\n2 1 0 0\n3 1 1 0\n4 0 1 0\n"
                   "$EndNodes\n$Elements\n1\n1 3 2 0 1 1 2 3 4\n$EndElements\n") ==
        MshErrorCode::unsupported_element);
  CHECK(error_code("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n1\n1 0 0 0\n$EndNodes\n$Elements\n0\n"
                   "$EndElements\n") == MshErrorCode::no_cells);
  CHECK(error_code("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n3\n1 0 0 0\n") == MshErrorCode::malformed_section);
  CHECK_THROWS(read_msh_file(fixture("does_not_exist.msh")));
}

TEST_CASE("cells are stored with ascending vertex indices") {
  const std::string text =
      "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n3\n1 0 0 0\n2 1 0 0\n3 0 1 0\n$EndNodes\n"
      "$Elements\n1\n1 2 0 3 1 2\n$EndElements\n";
  std::istringstream in(text);
  const Mesh m = read_msh(in);
  const auto c = m.cell(0);
  CHECK(c[0] < c[1]);
  CHECK(c[1] < c[2]);
}
