#include "smoothsc/dofmap.hpp"

#include <stdexcept>

namespace smoothsc {

std::string to_string(Family family) {
  switch (family) {
    case Family::lagrange: return "lagrange";
    case Family::dg: return "dg";
    case Family::nedelec1: return "nedelec1";
  }
  return "?";
}

Family parse_family(const std::string& name) {
  if (name == "lagrange") return Family::lagrange;
  if (name == "dg") return Family::dg;
  if (name == "nedelec1") return Family::nedelec1;
  throw std::invalid_argument("unknown element family '" + name + "'");
}

DofMap::DofMap(std::shared_ptr<const Mesh> mesh, const SpaceSpec& spec) : mesh_(std::move(mesh)), spec_(spec) {
  if (!mesh_) throw std::invalid_argument("build_dofmap: null mesh");
  if (spec.dim != mesh_->dim())
    throw std::invalid_argument("build_dofmap: space dimension does not match the mesh");
  if (spec.family != Family::lagrange && spec.dirichlet)
    throw std::invalid_argument("build_dofmap: " + to_string(spec.family) + " spaces never eliminate dofs");
  if (spec.family == Family::nedelec1 && spec.complex)
    throw std::invalid_argument("build_dofmap: complex Nedelec spaces are not supported");
  element_ = get_element(spec.family, spec.dim, spec.degree);
  topo_ = std::make_shared<Topology>(build_topology(*mesh_));
  const Topology& t = *topo_;
  const int dim = spec.dim;
  const std::size_t nc = mesh_->num_cells();
  const int nloc = element_->num_dofs();
  cell_dofs_.assign(nc * nloc, -1);

  if (spec.family == Family::dg) {
    entities_.reserve(nc * nloc);
    for (std::size_t c = 0; c < nc; ++c)
      for (int i = 0; i < nloc; ++i) {
        cell_dofs_[c * nloc + i] = static_cast<int>(entities_.size());
        entities_.push_back({dim, static_cast<int>(c), i});
      }
  } else {
    const std::size_t nv = mesh_->num_vertices();
    const std::size_t ne = t.edges.size();
    const std::size_t nf = dim == 3 ? t.faces.size() : nc;
    const std::array<std::size_t, 4> count{nv, ne, nf, dim == 3 ? nc : 0};
    std::array<std::size_t, 4> offset{};
    std::size_t total = 0;
    for (int d = 0; d < 4; ++d) {
      offset[d] = total;
      total += count[d] * element_->dofs_per_entity(d);
    }
    entities_.resize(total);
    for (int d = 0; d < 4; ++d)
      for (std::size_t e = 0; e < count[d]; ++e)
        for (int j = 0; j < element_->dofs_per_entity(d); ++j)
          entities_[offset[d] + e * element_->dofs_per_entity(d) + j] = {d, static_cast<int>(e), j};
    for (std::size_t c = 0; c < nc; ++c) {
      auto cell = mesh_->cell(c);
      for (int i = 0; i < nloc; ++i) {
        const LocalDof& ld = element_->dofs()[i];
        std::size_t ent = 0;
        switch (ld.entity_dim) {
          case 0: ent = cell[ld.local_entity]; break;
          case 1: ent = t.cell_edges[c][ld.local_entity]; break;
          case 2: ent = dim == 3 ? t.cell_faces[c][ld.local_entity] : c; break;
          default: ent = c; break;
        }
        cell_dofs_[c * nloc + i] =
            static_cast<int>(offset[ld.entity_dim] + ent * element_->dofs_per_entity(ld.entity_dim) + ld.index);
      }
    }
  }

  mask_.assign(entities_.size(), 0);
  if (spec.dirichlet) {
    for (std::size_t g = 0; g < entities_.size(); ++g) {
      const DofEntity& de = entities_[g];
      bool on_boundary = false;
      if (de.entity_dim == 0) on_boundary = t.vertex_on_boundary[de.entity];
      else if (de.entity_dim == 1) on_boundary = t.edge_on_boundary[de.entity];
      else if (de.entity_dim == 2 && dim == 3) on_boundary = t.face_on_boundary[de.entity];
      mask_[g] = on_boundary ? 1 : 0;
    }
  }
  free_index_.assign(entities_.size(), -1);
  for (std::size_t g = 0; g < entities_.size(); ++g)
    if (!mask_[g]) {
      free_index_[g] = static_cast<int>(free_to_global_.size());
      free_to_global_.push_back(static_cast<int>(g));
    }
}

DofMap build_dofmap(std::shared_ptr<const Mesh> mesh, const SpaceSpec& spec) { return DofMap(std::move(mesh), spec); }

}  // namespace smoothsc
