#pragma once

#include <array>
#include <vector>

#include "smoothsc/mesh.hpp"

namespace smoothsc {

/// Local sub-entity conventions on the reference simplex. Edges and faces are
/// listed as ascending local vertex tuples; facet k is opposite vertex k.
namespace reference_topology {

inline constexpr std::array<std::array<int, 2>, 3> triangle_edges{{{0, 1}, {0, 2}, {1, 2}}};
inline constexpr std::array<std::array<int, 2>, 6> tet_edges{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
inline constexpr std::array<std::array<int, 3>, 4> tet_faces{
    {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}};

inline int num_edges(int dim) { return dim == 2 ? 3 : 6; }
inline int num_faces(int dim) { return dim == 2 ? 1 : 4; }
inline std::array<int, 2> edge(int dim, int e) {
  return dim == 2 ? triangle_edges[e] : tet_edges[e];
}
/// Index of the facet opposite local vertex `v` in the local edge (2D) or
/// face (3D) list.
inline int facet_opposite(int dim, int v) { return dim - v; }

}  // namespace reference_topology

/// Global edges/faces/facets of a mesh, numbered lexicographically by their
/// sorted vertex tuples.
struct Topology {
  int dim = 0;
  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<int, 3>> faces;        // 3D only
  std::vector<std::array<int, 6>> cell_edges;   // local edge order
  std::vector<std::array<int, 4>> cell_faces;   // local face order, 3D only

  // Facets are edges in 2D and faces in 3D.
  std::vector<std::array<int, 2>> facet_cells;  // [1] == -1 on the boundary
  std::vector<std::array<int, 2>> facet_local;  // local facet index in each cell
  std::vector<char> vertex_on_boundary;
  std::vector<char> edge_on_boundary;
  std::vector<char> face_on_boundary;  // 3D only

  std::size_t num_facets() const { return facet_cells.size(); }
  bool is_boundary_facet(std::size_t f) const { return facet_cells[f][1] < 0; }
  FacetKey facet_key(std::size_t f) const;
  /// Global facet index of local facet `local` (opposite vertex) of `cell`.
  int cell_facet(std::size_t cell, int local) const;
};

Topology build_topology(const Mesh& mesh);

}  // namespace smoothsc
