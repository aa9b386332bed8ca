#include "smoothsc/msh_reader.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <vector>

namespace smoothsc {

namespace {

struct RawElement {
  int type;
  int physical;
  std::vector<long long> nodes;
};

int nodes_per_type(int type) {
  switch (type) {
    case 1: return 2;
    case 2: return 3;
    case 4: return 4;
    case 15: return 1;
    default: return -1;
  }
}

int dim_of_type(int type) {
  switch (type) {
    case 1: return 1;
    case 2: return 2;
    case 4: return 3;
    default: return 0;
  }
}

void check_type(int type) {
  if (nodes_per_type(type) < 0)
    throw MshError(MshErrorCode::unsupported_element, "msh: unsupported element type " + std::to_string(type));
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Collects the whitespace-separated body of a section up to its end marker.
std::string read_section(std::istream& in, const std::string& name) {
  const std::string end = "$End" + name;
  std::string body, line;
  while (std::getline(in, line)) {
    if (trim(line) == end) return body;
    body += line;
    body += '\n';
  }
  throw MshError(MshErrorCode::malformed_section, "msh: missing " + end);
}

template <class T>
T next(std::istream& s, const char* what) {
  T v{};
  if (!(s >> v)) throw MshError(MshErrorCode::malformed_section, std::string("msh: truncated ") + what);
  return v;
}

struct Parsed {
  double version = 0.0;
  std::map<long long, Point> nodes;
  std::vector<RawElement> elements;
};

void parse_nodes_v2(const std::string& body, Parsed& p) {
  std::istringstream s(body);
  const auto n = next<long long>(s, "$Nodes");
  for (long long i = 0; i < n; ++i) {
    const auto tag = next<long long>(s, "$Nodes");
    Point x;
    for (int k = 0; k < 3; ++k) x[k] = next<double>(s, "$Nodes");
    p.nodes[tag] = x;
  }
}

void parse_elements_v2(const std::string& body, Parsed& p) {
  std::istringstream s(body);
  const auto n = next<long long>(s, "$Elements");
  for (long long i = 0; i < n; ++i) {
    next<long long>(s, "$Elements");
    const int type = next<int>(s, "$Elements");
    check_type(type);
    const int ntags = next<int>(s, "$Elements");
    int physical = 0;
    for (int t = 0; t < ntags; ++t) {
      const int tag = next<int>(s, "$Elements");
      if (t == 0) physical = tag;
    }
    RawElement e{type, physical, {}};
    for (int k = 0; k < nodes_per_type(type); ++k) e.nodes.push_back(next<long long>(s, "$Elements"));
    p.elements.push_back(std::move(e));
  }
}

using EntityTags = std::map<std::pair<int, int>, int>;  // (dim, entity) -> physical tag

void parse_entities_v4(const std::string& body, EntityTags& tags) {
  std::istringstream s(body);
  std::array<long long, 4> counts{};
  for (auto& c : counts) c = next<long long>(s, "$Entities");
  for (int dim = 0; dim < 4; ++dim) {
    for (long long i = 0; i < counts[dim]; ++i) {
      const int tag = next<int>(s, "$Entities");
      const int ncoord = dim == 0 ? 3 : 6;
      for (int k = 0; k < ncoord; ++k) next<double>(s, "$Entities");
      const auto nphys = next<long long>(s, "$Entities");
      int physical = 0;
      for (long long k = 0; k < nphys; ++k) {
        const int ph = next<int>(s, "$Entities");
        if (k == 0) physical = ph;
      }
      tags[{dim, tag}] = physical;
      if (dim > 0) {
        const auto nb = next<long long>(s, "$Entities");
        for (long long k = 0; k < nb; ++k) next<long long>(s, "$Entities");
      }
    }
  }
}

void parse_nodes_v4(const std::string& body, Parsed& p) {
  std::istringstream s(body);
  const auto nblocks = next<long long>(s, "$Nodes");
  next<long long>(s, "$Nodes");
  next<long long>(s, "$Nodes");
  next<long long>(s, "$Nodes");
  for (long long b = 0; b < nblocks; ++b) {
    next<int>(s, "$Nodes");
    next<int>(s, "$Nodes");
    const int parametric = next<int>(s, "$Nodes");
    if (parametric != 0)
      throw MshError(MshErrorCode::malformed_section, "msh: parametric node blocks are not supported");
    const auto count = next<long long>(s, "$Nodes");
    std::vector<long long> tags(count);
    for (auto& t : tags) t = next<long long>(s, "$Nodes");
    for (long long i = 0; i < count; ++i) {
      Point x;
      for (int k = 0; k < 3; ++k) x[k] = next<double>(s, "$Nodes");
      p.nodes[tags[i]] = x;
    }
  }
}

void parse_elements_v4(const std::string& body, const EntityTags& tags, Parsed& p) {
  std::istringstream s(body);
  const auto nblocks = next<long long>(s, "$Elements");
  next<long long>(s, "$Elements");
  next<long long>(s, "$Elements");
  next<long long>(s, "$Elements");
  for (long long b = 0; b < nblocks; ++b) {
    const int edim = next<int>(s, "$Elements");
    const int etag = next<int>(s, "$Elements");
    const int type = next<int>(s, "$Elements");
    check_type(type);
    const auto count = next<long long>(s, "$Elements");
    auto it = tags.find({edim, etag});
    const int physical = it == tags.end() ? 0 : it->second;
    for (long long i = 0; i < count; ++i) {
      next<long long>(s, "$Elements");
      RawElement e{type, physical, {}};
      for (int k = 0; k < nodes_per_type(type); ++k) e.nodes.push_back(next<long long>(s, "$Elements"));
      p.elements.push_back(std::move(e));
    }
  }
}

}  // namespace

Mesh read_msh(std::istream& in) {
  Parsed p;
  EntityTags entity_tags;
  std::string pending_nodes, pending_elements;
  bool have_format = false, have_nodes = false, have_elements = false;
  std::string line;
  while (std::getline(in, line)) {
    const std::string head = trim(line);
    if (head.empty()) continue;
    if (head.size() < 2 || head[0] != '$') {
      if (!have_format) throw MshError(MshErrorCode::malformed_header, "msh: expected $MeshFormat");
      continue;
    }
    const std::string name = head.substr(1);
    if (name == "MeshFormat") {
      std::istringstream s(read_section(in, name));
      int file_type = -1, data_size = 0;
      if (!(s >> p.version >> file_type >> data_size))
        throw MshError(MshErrorCode::malformed_header, "msh: malformed $MeshFormat");
      if (file_type != 0) throw MshError(MshErrorCode::binary_file, "msh: binary files are not supported");
      if (p.version != 2.2 && p.version != 4.1)
        throw MshError(MshErrorCode::malformed_header, "msh: unsupported format version");
      have_format = true;
      continue;
    }
    if (!have_format) throw MshError(MshErrorCode::malformed_header, "msh: expected $MeshFormat first");
    const std::string body = read_section(in, name);
    if (name == "Entities") {
      parse_entities_v4(body, entity_tags);
    } else if (name == "Nodes") {
      pending_nodes = body;
      have_nodes = true;
    } else if (name == "Elements") {
      pending_elements = body;
      have_elements = true;
    }
    // $PhysicalNames and other sections carry nothing needed here.
  }
  if (!have_format) throw MshError(MshErrorCode::malformed_header, "msh: missing $MeshFormat");
  if (!have_nodes) throw MshError(MshErrorCode::malformed_section, "msh: missing $Nodes");
  if (!have_elements) throw MshError(MshErrorCode::no_cells, "msh: no cells");

  if (p.version == 2.2) {
    parse_nodes_v2(pending_nodes, p);
    parse_elements_v2(pending_elements, p);
  } else {
    parse_nodes_v4(pending_nodes, p);
    parse_elements_v4(pending_elements, entity_tags, p);
  }

  int dim = 0;
  for (const auto& e : p.elements) dim = std::max(dim, dim_of_type(e.type));
  if (dim < 2) throw MshError(MshErrorCode::no_cells, "msh: no cells");

  std::map<long long, int> renumber;
  for (const auto& e : p.elements)
    if (dim_of_type(e.type) == dim)
      for (auto n : e.nodes) renumber.emplace(n, 0);
  std::vector<Point> verts;
  verts.reserve(renumber.size());
  for (auto& [tag, idx] : renumber) {
    auto it = p.nodes.find(tag);
    if (it == p.nodes.end())
      throw MshError(MshErrorCode::malformed_section, "msh: element references unknown node " + std::to_string(tag));
    idx = static_cast<int>(verts.size());
    Point x = it->second;
    if (dim == 2) x.z() = 0.0;
    verts.push_back(x);
  }

  std::vector<Mesh::Cell> cells;
  for (const auto& e : p.elements) {
    if (dim_of_type(e.type) != dim) continue;
    Mesh::Cell c{-1, -1, -1, -1};
    for (std::size_t k = 0; k < e.nodes.size(); ++k) c[k] = renumber.at(e.nodes[k]);
    cells.push_back(c);
  }
  Mesh mesh(dim, std::move(verts), std::move(cells));
  for (const auto& e : p.elements) {
    if (dim_of_type(e.type) != dim - 1 || e.physical == 0) continue;
    FacetKey k{-1, -1, -1};
    bool known = true;
    for (std::size_t i = 0; i < e.nodes.size(); ++i) {
      auto it = renumber.find(e.nodes[i]);
      if (it == renumber.end()) {
        known = false;
        break;
      }
      k[i] = it->second;
    }
    if (!known) continue;
    std::sort(k.begin(), k.begin() + dim);
    mesh.set_boundary_tag(k, e.physical);
  }
  mesh.init_nvb_longest_edge();
  return mesh;
}

Mesh read_msh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file '" + path + "'");
  return read_msh(in);
}

}  // namespace smoothsc
