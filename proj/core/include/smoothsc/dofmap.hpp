#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "smoothsc/mesh.hpp"
#include "smoothsc/reference_element.hpp"
#include "smoothsc/topology.hpp"

namespace smoothsc {

struct SpaceSpec {
  Family family = Family::lagrange;
  int degree = 1;
  int dim = 2;
  bool complex = false;
  bool dirichlet = true;
};

std::string to_string(Family family);
Family parse_family(const std::string& name);

/// Per-dof entity record: entity_dim (0 vertex .. 3 cell; in 2D the cell is
/// entity_dim 2), global entity index, moment index within the entity.
struct DofEntity {
  int entity_dim;
  int entity;
  int index;
};

/// Global numbering of an FE space. Dofs are numbered entity-major (all
/// vertex dofs, then edges, faces, cells; within an entity type by entity
/// index then moment index). DG spaces number dofs cell by cell. Vectors and
/// matrices elsewhere in the library are indexed by the free (unmasked)
/// dofs, in increasing global order.
class DofMap {
 public:
  DofMap(std::shared_ptr<const Mesh> mesh, const SpaceSpec& spec);

  const SpaceSpec& spec() const { return spec_; }
  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  const Topology& topology() const { return *topo_; }
  std::shared_ptr<const Topology> topology_ptr() const { return topo_; }
  const ReferenceElement& element() const { return *element_; }

  std::size_t ndof() const { return entities_.size(); }
  std::size_t num_free() const { return free_to_global_.size(); }
  int dofs_per_cell() const { return element_->num_dofs(); }

  /// Global dof indices of `cell` in local element order.
  std::span<const int> cell_dofs(std::size_t cell) const {
    return {cell_dofs_.data() + cell * dofs_per_cell(), static_cast<std::size_t>(dofs_per_cell())};
  }
  const DofEntity& dof_entity(std::size_t dof) const { return entities_[dof]; }
  bool is_masked(std::size_t dof) const { return mask_[dof] != 0; }
  const std::vector<char>& boundary_mask() const { return mask_; }
  /// Position of global dof among free dofs, or -1 when masked.
  int free_index(std::size_t dof) const { return free_index_[dof]; }
  int free_to_global(std::size_t i) const { return free_to_global_[i]; }

 private:
  std::shared_ptr<const Mesh> mesh_;
  std::shared_ptr<const Topology> topo_;
  std::shared_ptr<const ReferenceElement> element_;
  SpaceSpec spec_;
  std::vector<int> cell_dofs_;
  std::vector<DofEntity> entities_;
  std::vector<char> mask_;
  std::vector<int> free_index_;
  std::vector<int> free_to_global_;
};

DofMap build_dofmap(std::shared_ptr<const Mesh> mesh, const SpaceSpec& spec);

}  // namespace smoothsc
