#include "smoothsc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "smoothsc/topology.hpp"
#include <Eigen/Dense>

namespace smoothsc {

namespace rt = reference_topology;

DomainId parse_domain(const std::string& name) {
  if (name == "unit_square_threeline" || name == "square") return DomainId::unit_square_threeline;
  if (name == "hexagon") return DomainId::hexagon;
  if (name == "unit_cube" || name == "cube") return DomainId::unit_cube;
  if (name == "l_shape") return DomainId::l_shape;
  throw std::invalid_argument("unknown domain id '" + name + "'");
}

std::string to_string(DomainId id) {
  switch (id) {
    case DomainId::unit_square_threeline: return "unit_square_threeline";
    case DomainId::hexagon: return "hexagon";
    case DomainId::unit_cube: return "unit_cube";
    case DomainId::l_shape: return "l_shape";
  }
  return "?";
}

Mesh::Mesh(int dim, std::vector<Point> vertices, std::vector<Cell> cells)
    : dim_(dim), vertices_(std::move(vertices)), cells_(std::move(cells)) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("mesh dimension must be 2 or 3");
  for (auto& c : cells_) {
    std::sort(c.begin(), c.begin() + dim + 1);
    for (int k = dim + 1; k < 4; ++k) c[k] = -1;
  }
}

double Mesh::cell_measure(std::size_t c) const {
  auto v = cell(c);
  if (dim_ == 2) {
    const Point a = vertices_[v[1]] - vertices_[v[0]];
    const Point b = vertices_[v[2]] - vertices_[v[0]];
    return 0.5 * std::abs(a.x() * b.y() - a.y() * b.x());
  }
  const Point a = vertices_[v[1]] - vertices_[v[0]];
  const Point b = vertices_[v[2]] - vertices_[v[0]];
  const Point d = vertices_[v[3]] - vertices_[v[0]];
  return std::abs(a.dot(b.cross(d))) / 6.0;
}

double Mesh::total_measure() const {
  double s = 0.0;
  for (std::size_t c = 0; c < cells_.size(); ++c) s += cell_measure(c);
  return s;
}

double Mesh::cell_diameter(std::size_t c) const {
  auto v = cell(c);
  double d = 0.0;
  for (int i = 0; i <= dim_; ++i)
    for (int j = i + 1; j <= dim_; ++j) d = std::max(d, (vertices_[v[i]] - vertices_[v[j]]).norm());
  return d;
}

int Mesh::boundary_tag(const FacetKey& facet) const {
  auto it = boundary_tags_.find(facet);
  return it == boundary_tags_.end() ? 0 : it->second;
}

void Mesh::set_boundary_tag(const FacetKey& facet, int tag) {
  if (tag == 0)
    boundary_tags_.erase(facet);
  else
    boundary_tags_[facet] = tag;
}

void Mesh::init_nvb_longest_edge() {
  if (dim_ != 2) {
    nvb_.clear();
    return;
  }
  nvb_.assign(cells_.size(), 0);
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    auto v = cell(c);
    int best = 0;
    double best_len = -1.0;
    // local vertex k is opposite edge {0,1,2}\{k}; scan edges (1,2),(0,2),(0,1)
    for (int k = 0; k < 3; ++k) {
      const int a = (k == 0) ? 1 : 0;
      const int b = (k == 2) ? 1 : 2;
      const double len = (vertices_[v[a]] - vertices_[v[b]]).norm();
      if (len > best_len * (1.0 + 1e-12)) {
        best_len = len;
        best = k;
      }
    }
    nvb_[c] = static_cast<std::int8_t>(best);
  }
}

void Mesh::set_nvb_state(std::vector<std::int8_t> state) {
  if (state.size() != cells_.size()) throw std::invalid_argument("nvb state size mismatch");
  nvb_ = std::move(state);
}

void Mesh::validate() const {
  double scale = 0.0;
  for (std::size_t c = 0; c < cells_.size(); ++c) scale = std::max(scale, cell_diameter(c));
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    auto v = cell(c);
    for (int i = 0; i < dim_; ++i)
      if (!(v[i] < v[i + 1])) throw std::runtime_error("cell vertices not strictly ascending");
    for (int i = 0; i <= dim_; ++i)
      if (v[i] < 0 || v[i] >= static_cast<int>(vertices_.size()))
        throw std::runtime_error("cell references missing vertex");
    if (cell_measure(c) <= 1e-14 * std::pow(cell_diameter(c), dim_))
      throw std::runtime_error("cell " + std::to_string(c) + " has non-positive measure");
  }
  // build_topology throws when a facet is shared by more than two cells. A
  // hanging node from bisection sits at the midpoint of an edge of a boundary
  // facet, which is checked against the vertex coordinates.
  const Topology topo = build_topology(*this);
  std::map<std::array<long long, 3>, int> coords;
  auto key_of = [&](const Point& p) {
    const double q = 1e9 / std::max(scale, 1e-300);
    return std::array<long long, 3>{std::llround(p.x() * q), std::llround(p.y() * q), std::llround(p.z() * q)};
  };
  for (std::size_t i = 0; i < vertices_.size(); ++i) coords.emplace(key_of(vertices_[i]), static_cast<int>(i));
  for (std::size_t f = 0; f < topo.num_facets(); ++f) {
    if (!topo.is_boundary_facet(f)) continue;
    const FacetKey k = topo.facet_key(f);
    const int nk = dim_;
    for (int i = 0; i < nk; ++i)
      for (int j = i + 1; j < nk; ++j)
        if (coords.count(key_of(0.5 * (vertices_[k[i]] + vertices_[k[j]]))))
          throw std::runtime_error("non-conforming mesh: hanging vertex on facet");
  }
}

MeshStats mesh_stats(const Mesh& mesh) {
  MeshStats s;
  const Topology topo = build_topology(mesh);
  s.num_vertices = mesh.num_vertices();
  s.num_cells = mesh.num_cells();
  s.num_facets = topo.num_facets();
  s.h_max = 0.0;
  s.h_min = std::numeric_limits<double>::infinity();
  for (const auto& e : topo.edges) {
    const double len = (mesh.vertex(e[0]) - mesh.vertex(e[1])).norm();
    s.h_max = std::max(s.h_max, len);
    s.h_min = std::min(s.h_min, len);
  }
  const int dim = mesh.dim();
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    auto v = mesh.cell(c);
    double boundary_measure = 0.0;
    if (dim == 2) {
      for (int e = 0; e < 3; ++e) {
        auto le = rt::triangle_edges[e];
        boundary_measure += (mesh.vertex(v[le[0]]) - mesh.vertex(v[le[1]])).norm();
      }
    } else {
      for (int f = 0; f < 4; ++f) {
        auto lf = rt::tet_faces[f];
        const Point a = mesh.vertex(v[lf[1]]) - mesh.vertex(v[lf[0]]);
        const Point b = mesh.vertex(v[lf[2]]) - mesh.vertex(v[lf[0]]);
        boundary_measure += 0.5 * a.cross(b).norm();
      }
    }
    const double inradius = dim * mesh.cell_measure(c) / boundary_measure;
    s.shape_regularity = std::max(s.shape_regularity, mesh.cell_diameter(c) / inradius);
  }
  return s;
}

double initial_mesh_size(DomainId domain) {
  switch (domain) {
    case DomainId::unit_square_threeline: return 1.0;
    case DomainId::hexagon: return 1.0;
    case DomainId::unit_cube: return 1.0;
    case DomainId::l_shape: return 1.0;
  }
  return 1.0;
}

namespace {

Mesh initial_mesh(DomainId domain) {
  using Cell = Mesh::Cell;
  switch (domain) {
    case DomainId::unit_square_threeline: {
      std::vector<Point> v{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
      std::vector<Cell> c{{0, 1, 3, -1}, {0, 2, 3, -1}};
      return Mesh(2, std::move(v), std::move(c));
    }
    case DomainId::hexagon: {
      std::vector<Point> v{{0, 0, 0}};
      for (int i = 0; i < 6; ++i) {
        const double theta = i * std::numbers::pi / 3.0;
        v.emplace_back(std::sin(theta), std::cos(theta), 0.0);
      }
      std::vector<Cell> c;
      for (int i = 1; i <= 6; ++i) c.push_back({0, i, i % 6 + 1, -1});
      return Mesh(2, std::move(v), std::move(c));
    }
    case DomainId::unit_cube: {
      std::vector<Point> v;
      for (int k = 0; k < 8; ++k) v.emplace_back(k & 1, (k >> 1) & 1, (k >> 2) & 1);
      // Kuhn split: one tetrahedron per monotone path 0 -> 7.
      std::vector<Cell> c{{0, 1, 3, 7}, {0, 1, 5, 7}, {0, 2, 3, 7},
                          {0, 2, 6, 7}, {0, 4, 5, 7}, {0, 4, 6, 7}};
      return Mesh(3, std::move(v), std::move(c));
    }
    case DomainId::l_shape: {
      std::vector<Point> v{{-1, -1, 0}, {0, -1, 0}, {-1, 0, 0}, {0, 0, 0},
                           {1, 0, 0},   {-1, 1, 0}, {0, 1, 0},  {1, 1, 0}};
      // Three unit squares, each split by the diagonal through the origin.
      std::vector<Cell> c{{0, 1, 3, -1}, {0, 2, 3, -1}, {2, 3, 5, -1},
                          {3, 5, 6, -1}, {3, 4, 7, -1}, {3, 6, 7, -1}};
      return Mesh(2, std::move(v), std::move(c));
    }
  }
  throw std::invalid_argument("unknown domain id");
}

struct PairHash {
  std::size_t operator()(std::uint64_t k) const { return std::hash<std::uint64_t>{}(k); }
};

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

FacetKey sorted_facet(int a, int b, int c = -1) {
  FacetKey k{a, b, c};
  if (c < 0)
    std::sort(k.begin(), k.begin() + 2);
  else
    std::sort(k.begin(), k.end());
  return k;
}

}  // namespace

Mesh generate_structured(DomainId domain, int level) {
  if (level < 0) throw std::invalid_argument("level must be non-negative");
  Mesh mesh = initial_mesh(domain);
  for (int l = 0; l < level; ++l) mesh = uniform_refine(mesh);
  mesh.set_level(level);
  mesh.init_nvb_longest_edge();
  return mesh;
}

Mesh uniform_refine(const Mesh& mesh) {
  const Topology topo = build_topology(mesh);
  const int dim = mesh.dim();
  const int nv = static_cast<int>(mesh.num_vertices());
  std::vector<Point> verts = mesh.vertices();
  verts.reserve(nv + topo.edges.size());
  for (const auto& e : topo.edges) verts.push_back(0.5 * (mesh.vertex(e[0]) + mesh.vertex(e[1])));

  std::unordered_map<std::uint64_t, int, PairHash> midpoint;
  midpoint.reserve(topo.edges.size());
  for (std::size_t e = 0; e < topo.edges.size(); ++e)
    midpoint[edge_key(topo.edges[e][0], topo.edges[e][1])] = nv + static_cast<int>(e);
  auto mid = [&](int a, int b) { return midpoint.at(edge_key(a, b)); };

  std::vector<Mesh::Cell> cells;
  if (dim == 2) {
    cells.reserve(4 * mesh.num_cells());
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
      auto v = mesh.cell(c);
      const int m01 = nv + topo.cell_edges[c][0];
      const int m02 = nv + topo.cell_edges[c][1];
      const int m12 = nv + topo.cell_edges[c][2];
      cells.push_back({v[0], m01, m02, -1});
      cells.push_back({v[1], m01, m12, -1});
      cells.push_back({v[2], m02, m12, -1});
      cells.push_back({m01, m02, m12, -1});
    }
  } else {
    cells.reserve(8 * mesh.num_cells());
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
      auto cv = mesh.cell(c);
      // Path order x0..x3: longest edge gives the ends, x1 is the remaining
      // vertex closer to x0. For Kuhn simplices this reproduces the
      // Freudenthal subdivision (all children congruent).
      std::array<int, 4> x{cv[0], cv[1], cv[2], cv[3]};
      int ea = 0, eb = 1;
      double longest = -1.0;
      for (const auto& le : rt::tet_edges) {
        const double len = (mesh.vertex(x[le[0]]) - mesh.vertex(x[le[1]])).norm();
        if (len > longest * (1.0 + 1e-12)) {
          longest = len;
          ea = le[0];
          eb = le[1];
        }
      }
      std::array<int, 2> rest{};
      int r = 0;
      for (int k = 0; k < 4; ++k)
        if (k != ea && k != eb) rest[r++] = k;
      const Point& p0 = mesh.vertex(x[ea]);
      const double d0 = (mesh.vertex(x[rest[0]]) - p0).norm();
      const double d1 = (mesh.vertex(x[rest[1]]) - p0).norm();
      if (d1 < d0 * (1.0 - 1e-12)) std::swap(rest[0], rest[1]);
      const std::array<int, 4> p{x[ea], x[rest[0]], x[rest[1]], x[eb]};
      const int m01 = mid(p[0], p[1]), m02 = mid(p[0], p[2]), m03 = mid(p[0], p[3]);
      const int m12 = mid(p[1], p[2]), m13 = mid(p[1], p[3]), m23 = mid(p[2], p[3]);
      cells.push_back({p[0], m01, m02, m03});
      cells.push_back({m01, p[1], m12, m13});
      cells.push_back({m02, m12, p[2], m23});
      cells.push_back({m03, m13, m23, p[3]});
      cells.push_back({m01, m02, m03, m13});
      cells.push_back({m01, m02, m12, m13});
      cells.push_back({m02, m03, m13, m23});
      cells.push_back({m02, m12, m13, m23});
    }
  }

  Mesh out(dim, std::move(verts), std::move(cells));
  for (const auto& [key, tag] : mesh.boundary_tags()) {
    if (dim == 2) {
      const int m = mid(key[0], key[1]);
      out.set_boundary_tag(sorted_facet(key[0], m), tag);
      out.set_boundary_tag(sorted_facet(key[1], m), tag);
    } else {
      const int mab = mid(key[0], key[1]), mac = mid(key[0], key[2]), mbc = mid(key[1], key[2]);
      out.set_boundary_tag(sorted_facet(key[0], mab, mac), tag);
      out.set_boundary_tag(sorted_facet(key[1], mab, mbc), tag);
      out.set_boundary_tag(sorted_facet(key[2], mac, mbc), tag);
      out.set_boundary_tag(sorted_facet(mab, mac, mbc), tag);
    }
  }
  out.set_level(mesh.level() + 1);
  out.init_nvb_longest_edge();
  return out;
}

Mesh bisect(const Mesh& mesh, std::span<const int> marked) {
  if (mesh.dim() != 2) throw std::invalid_argument("bisect: newest vertex bisection is 2D only");
  if (!mesh.has_nvb_state()) throw std::invalid_argument("bisect: mesh has no NVB state");
  if (marked.empty()) return mesh;

  const Topology topo = build_topology(mesh);
  const auto& nvb = mesh.refinement_vertex();
  const std::size_t nc = mesh.num_cells();
  const std::size_t ne = topo.edges.size();

  // local edge index (in triangle_edges order) of the refinement edge
  auto ref_edge_local = [&](std::size_t c) { return rt::facet_opposite(2, nvb[c]); };

  std::vector<char> edge_marked(ne, 0);
  std::vector<int> work;
  auto mark_edge = [&](int e) {
    if (edge_marked[e]) return;
    edge_marked[e] = 1;
    for (int k = 0; k < 2; ++k) {
      const int c = topo.facet_cells[e][k];
      if (c >= 0) work.push_back(c);
    }
  };
  for (int c : marked) {
    if (c < 0 || c >= static_cast<int>(nc)) throw std::out_of_range("bisect: marked cell out of range");
    mark_edge(topo.cell_edges[c][ref_edge_local(c)]);
  }
  // Closure: a triangle with any marked edge must also split its refinement edge.
  while (!work.empty()) {
    const int c = work.back();
    work.pop_back();
    mark_edge(topo.cell_edges[c][ref_edge_local(c)]);
  }

  std::vector<Point> verts = mesh.vertices();
  std::unordered_map<std::uint64_t, int, PairHash> midpoint;
  for (std::size_t e = 0; e < ne; ++e) {
    if (!edge_marked[e]) continue;
    const auto& ed = topo.edges[e];
    midpoint[edge_key(ed[0], ed[1])] = static_cast<int>(verts.size());
    verts.push_back(0.5 * (mesh.vertex(ed[0]) + mesh.vertex(ed[1])));
  }

  std::vector<Mesh::Cell> cells;
  std::vector<int> newest;  // global index of the newest vertex per output cell
  cells.reserve(nc + 2 * midpoint.size());
  // Children of a split keep a refinement edge that is an original edge of
  // the parent, so recursion depth is bounded by 2.
  auto emit = [&](auto&& self, int p, int e0, int e1) -> void {
    auto it = midpoint.find(edge_key(e0, e1));
    if (it == midpoint.end()) {
      cells.push_back({p, e0, e1, -1});
      newest.push_back(p);
      return;
    }
    const int m = it->second;
    self(self, m, p, e0);
    self(self, m, p, e1);
  };
  for (std::size_t c = 0; c < nc; ++c) {
    auto v = mesh.cell(c);
    const int k = nvb[c];
    const int p = v[k];
    const int e0 = v[k == 0 ? 1 : 0];
    const int e1 = v[k == 2 ? 1 : 2];
    emit(emit, p, e0, e1);
  }

  std::vector<std::int8_t> state(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    auto cell = cells[c];
    std::sort(cell.begin(), cell.begin() + 3);
    state[c] = static_cast<std::int8_t>(std::find(cell.begin(), cell.begin() + 3, newest[c]) - cell.begin());
  }
  Mesh out(2, std::move(verts), std::move(cells));
  out.set_nvb_state(std::move(state));
  for (const auto& [key, tag] : mesh.boundary_tags()) {
    auto it = midpoint.find(edge_key(key[0], key[1]));
    if (it == midpoint.end()) {
      out.set_boundary_tag(key, tag);
    } else {
      out.set_boundary_tag(sorted_facet(key[0], it->second), tag);
      out.set_boundary_tag(sorted_facet(key[1], it->second), tag);
    }
  }
  out.set_level(mesh.level());
  return out;
}

Mesh renumber_vertices(const Mesh& mesh, std::span<const int> perm) {
  if (perm.size() != mesh.num_vertices()) throw std::invalid_argument("permutation size mismatch");
  std::vector<Point> verts(mesh.num_vertices());
  for (std::size_t i = 0; i < perm.size(); ++i) verts[perm[i]] = mesh.vertex(i);
  std::vector<Mesh::Cell> cells = mesh.cells();
  std::vector<int> newest;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (mesh.has_nvb_state()) newest.push_back(perm[cells[c][mesh.refinement_vertex()[c]]]);
    for (int k = 0; k <= mesh.dim(); ++k) cells[c][k] = perm[cells[c][k]];
  }
  Mesh out(mesh.dim(), std::move(verts), std::move(cells));
  if (mesh.has_nvb_state()) {
    std::vector<std::int8_t> state(out.num_cells());
    for (std::size_t c = 0; c < out.num_cells(); ++c) {
      auto v = out.cell(c);
      state[c] = static_cast<std::int8_t>(std::find(v.begin(), v.end(), newest[c]) - v.begin());
    }
    out.set_nvb_state(std::move(state));
  }
  for (const auto& [key, tag] : mesh.boundary_tags()) {
    FacetKey k = key;
    for (auto& i : k)
      if (i >= 0) i = perm[i];
    out.set_boundary_tag(mesh.dim() == 2 ? sorted_facet(k[0], k[1]) : sorted_facet(k[0], k[1], k[2]), tag);
  }
  out.set_level(mesh.level());
  return out;
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out.precision(17);
  out << mesh.dim() << "\n" << mesh.num_vertices() << " " << mesh.num_cells() << "\n";
  for (const auto& p : mesh.vertices()) {
    out << p.x() << " " << p.y();
    if (mesh.dim() == 3) out << " " << p.z();
    out << "\n";
  }
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    auto v = mesh.cell(c);
    for (int k = 0; k <= mesh.dim(); ++k) out << (k ? " " : "") << v[k];
    out << "\n";
  }
}

Mesh read_mesh(std::istream& in) {
  int dim = 0;
  std::size_t nv = 0, nc = 0;
  if (!(in >> dim >> nv >> nc) || (dim != 2 && dim != 3))
    throw std::runtime_error("read_mesh: malformed header");
  std::vector<Point> verts(nv, Point::Zero());
  for (auto& p : verts)
    for (int k = 0; k < dim; ++k)
      if (!(in >> p[k])) throw std::runtime_error("read_mesh: truncated vertex list");
  std::vector<Mesh::Cell> cells(nc, {-1, -1, -1, -1});
  for (auto& c : cells)
    for (int k = 0; k <= dim; ++k)
      if (!(in >> c[k])) throw std::runtime_error("read_mesh: truncated cell list");
  Mesh mesh(dim, std::move(verts), std::move(cells));
  mesh.init_nvb_longest_edge();
  return mesh;
}

}  // namespace smoothsc
