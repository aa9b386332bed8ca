#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace smoothsc {

/// Coordinates are always stored as 3-vectors; 2D meshes keep z = 0.
using Point = Eigen::Vector3d;

/// Sorted vertex tuple identifying a facet (unused trailing slot is -1 in 2D).
using FacetKey = std::array<int, 3>;

enum class DomainId { unit_square_threeline, hexagon, unit_cube, l_shape };

DomainId parse_domain(const std::string& name);
std::string to_string(DomainId id);

/// Simplicial mesh. Cells store their vertex indices in strictly ascending
/// order, which fixes the global orientation of every edge and face.
class Mesh {
 public:
  using Cell = std::array<int, 4>;

  Mesh() = default;
  Mesh(int dim, std::vector<Point> vertices, std::vector<Cell> cells);

  int dim() const { return dim_; }
  int vertices_per_cell() const { return dim_ + 1; }
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_cells() const { return cells_.size(); }

  const Point& vertex(std::size_t i) const { return vertices_[i]; }
  const std::vector<Point>& vertices() const { return vertices_; }
  std::span<const int> cell(std::size_t c) const {
    return {cells_[c].data(), static_cast<std::size_t>(dim_ + 1)};
  }
  const std::vector<Cell>& cells() const { return cells_; }

  /// Signed-free cell measure (area or volume).
  double cell_measure(std::size_t c) const;
  double total_measure() const;
  double cell_diameter(std::size_t c) const;

  /// Physical tag of a boundary facet; 0 when untagged.
  int boundary_tag(const FacetKey& facet) const;
  const std::map<FacetKey, int>& boundary_tags() const { return boundary_tags_; }
  void set_boundary_tag(const FacetKey& facet, int tag);

  /// Newest-vertex-bisection state (2D only): local index of the vertex
  /// opposite the refinement edge of each triangle.
  const std::vector<std::int8_t>& refinement_vertex() const { return nvb_; }
  bool has_nvb_state() const { return dim_ == 2 && nvb_.size() == cells_.size(); }
  /// Longest-edge labeling; ties resolved towards the lowest local edge.
  void init_nvb_longest_edge();
  void set_nvb_state(std::vector<std::int8_t> state);

  int level() const { return level_; }
  void set_level(int level) { level_ = level; }

  /// Throws std::runtime_error if an invariant (ascending cells, positive
  /// measure, conformity) is violated.
  void validate() const;

 private:
  int dim_ = 0;
  std::vector<Point> vertices_;
  std::vector<Cell> cells_;
  std::map<FacetKey, int> boundary_tags_;
  std::vector<std::int8_t> nvb_;
  int level_ = 0;
};

struct MeshStats {
  double h_max = 0.0;
  double h_min = 0.0;
  std::size_t num_vertices = 0;
  std::size_t num_cells = 0;
  std::size_t num_facets = 0;
  /// max over cells of diameter / inradius
  double shape_regularity = 0.0;
};

MeshStats mesh_stats(const Mesh& mesh);

/// Documented initial mesh of `domain` refined uniformly `level` times.
Mesh generate_structured(DomainId domain, int level);

/// Initial mesh size of a structured family (reported h = 2^-level * this).
double initial_mesh_size(DomainId domain);

/// Red refinement: 4 children per triangle, 8 per tetrahedron. The interior
/// octahedron is cut along the diagonal joining the midpoints of x0x2 and
/// x1x3, where x0..x3 orders the vertices along the longest edge.
Mesh uniform_refine(const Mesh& mesh);

/// Newest vertex bisection of the marked triangles plus conforming closure.
Mesh bisect(const Mesh& mesh, std::span<const int> marked);

/// Returns a copy with vertices renumbered by `perm` (new index = perm[old]).
Mesh renumber_vertices(const Mesh& mesh, std::span<const int> perm);

/// Plain-text dump: "dim", "nv nc", vertex lines, cell lines.
void write_mesh(std::ostream& out, const Mesh& mesh);
Mesh read_mesh(std::istream& in);

}  // namespace smoothsc
