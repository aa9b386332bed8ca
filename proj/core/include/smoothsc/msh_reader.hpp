#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "smoothsc/mesh.hpp"

namespace smoothsc {

enum class MshErrorCode { malformed_header, binary_file, unsupported_element, no_cells, malformed_section };

class MshError : public std::runtime_error {
 public:
  MshError(MshErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  MshErrorCode code() const { return code_; }

 private:
  MshErrorCode code_;
};

/// Reads an ASCII Gmsh file (format 2.2 or 4.1). Only 2-node lines, 3-node
/// triangles and 4-node tetrahedra are accepted; point elements are skipped.
/// Cells are the highest-dimensional elements, and lower-dimensional elements
/// carrying a physical tag become boundary markers. Vertices referenced by
/// cells are renumbered in ascending node-tag order.
Mesh read_msh(std::istream& in);
Mesh read_msh_file(const std::string& path);

}  // namespace smoothsc
