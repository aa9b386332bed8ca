#include "smoothsc/topology.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace smoothsc {

namespace rt = reference_topology;

FacetKey Topology::facet_key(std::size_t f) const {
  if (dim == 2) return {edges[f][0], edges[f][1], -1};
  return faces[f];
}

int Topology::cell_facet(std::size_t cell, int local) const {
  const int idx = rt::facet_opposite(dim, local);
  return dim == 2 ? cell_edges[cell][idx] : cell_faces[cell][idx];
}

namespace {

template <std::size_t N>
struct Incidence {
  std::array<int, N> key;
  int cell;
  int local;
};

// Sorts incidences by key and assigns global entity numbers in lexicographic
// order. Returns the entity list and writes entity ids via `assign`.
template <std::size_t N, class Assign>
std::vector<std::array<int, N>> number_entities(std::vector<Incidence<N>>& inc, Assign assign) {
  std::sort(inc.begin(), inc.end(), [](const auto& a, const auto& b) {
    return std::tie(a.key, a.cell, a.local) < std::tie(b.key, b.cell, b.local);
  });
  std::vector<std::array<int, N>> entities;
  for (const auto& i : inc) {
    if (entities.empty() || entities.back() != i.key) entities.push_back(i.key);
    assign(i, static_cast<int>(entities.size()) - 1);
  }
  return entities;
}

}  // namespace

Topology build_topology(const Mesh& mesh) {
  Topology t;
  t.dim = mesh.dim();
  const int dim = mesh.dim();
  const std::size_t nc = mesh.num_cells();
  const int ne_loc = rt::num_edges(dim);

  std::vector<Incidence<2>> einc;
  einc.reserve(nc * ne_loc);
  for (std::size_t c = 0; c < nc; ++c) {
    auto cell = mesh.cell(c);
    for (int e = 0; e < ne_loc; ++e) {
      auto le = rt::edge(dim, e);
      einc.push_back({{cell[le[0]], cell[le[1]]}, static_cast<int>(c), e});
    }
  }
  t.cell_edges.assign(nc, {-1, -1, -1, -1, -1, -1});
  t.edges = number_entities(einc, [&](const Incidence<2>& i, int id) {
    t.cell_edges[i.cell][i.local] = id;
  });

  // Facet incidences (edges in 2D, faces in 3D).
  std::vector<std::array<int, 2>> facet_cells;
  std::vector<std::array<int, 2>> facet_local;
  auto add_facet_incidence = [&](int facet, int cell, int local_facet) {
    if (facet >= static_cast<int>(facet_cells.size())) {
      facet_cells.resize(facet + 1, {-1, -1});
      facet_local.resize(facet + 1, {-1, -1});
    }
    auto& fc = facet_cells[facet];
    auto& fl = facet_local[facet];
    if (fc[0] < 0) {
      fc[0] = cell;
      fl[0] = local_facet;
    } else if (fc[1] < 0) {
      fc[1] = cell;
      fl[1] = local_facet;
    } else {
      throw std::runtime_error("non-conforming mesh: facet shared by more than two cells");
    }
  };

  if (dim == 3) {
    std::vector<Incidence<3>> finc;
    finc.reserve(nc * 4);
    for (std::size_t c = 0; c < nc; ++c) {
      auto cell = mesh.cell(c);
      for (int f = 0; f < 4; ++f) {
        auto lf = rt::tet_faces[f];
        finc.push_back({{cell[lf[0]], cell[lf[1]], cell[lf[2]]}, static_cast<int>(c), f});
      }
    }
    t.cell_faces.assign(nc, {-1, -1, -1, -1});
    t.faces = number_entities(finc, [&](const Incidence<3>& i, int id) {
      t.cell_faces[i.cell][i.local] = id;
    });
    facet_cells.reserve(t.faces.size());
    for (std::size_t c = 0; c < nc; ++c)
      for (int v = 0; v < 4; ++v)
        add_facet_incidence(t.cell_faces[c][rt::facet_opposite(3, v)], static_cast<int>(c), v);
    facet_cells.resize(t.faces.size(), {-1, -1});
    facet_local.resize(t.faces.size(), {-1, -1});
  } else {
    facet_cells.reserve(t.edges.size());
    for (std::size_t c = 0; c < nc; ++c)
      for (int v = 0; v < 3; ++v)
        add_facet_incidence(t.cell_edges[c][rt::facet_opposite(2, v)], static_cast<int>(c), v);
    facet_cells.resize(t.edges.size(), {-1, -1});
    facet_local.resize(t.edges.size(), {-1, -1});
  }
  t.facet_cells = std::move(facet_cells);
  t.facet_local = std::move(facet_local);

  t.vertex_on_boundary.assign(mesh.num_vertices(), 0);
  t.edge_on_boundary.assign(t.edges.size(), 0);
  if (dim == 3) t.face_on_boundary.assign(t.faces.size(), 0);
  for (std::size_t f = 0; f < t.num_facets(); ++f) {
    if (!t.is_boundary_facet(f)) continue;
    const int c = t.facet_cells[f][0];
    const int opp = t.facet_local[f][0];
    auto cell = mesh.cell(c);
    for (int v = 0; v <= dim; ++v)
      if (v != opp) t.vertex_on_boundary[cell[v]] = 1;
    for (int e = 0; e < ne_loc; ++e) {
      auto le = rt::edge(dim, e);
      if (le[0] != opp && le[1] != opp) t.edge_on_boundary[t.cell_edges[c][e]] = 1;
    }
    if (dim == 3) t.face_on_boundary[f] = 1;
  }
  return t;
}

}  // namespace smoothsc
