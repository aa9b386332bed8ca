#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "smoothsc/adaptivity.hpp"
#include "smoothsc/experiment.hpp"

namespace smoothsc {

/// Config grammar, one item per line:
///   # comment            (also ';'; blank lines ignored)
///   [section]            case id, optionally suffixed ".label"
///   key = value          within a section; keys are unique per section
/// Values are plain text; lists are comma separated, level ranges "a..b".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& what)
      : std::runtime_error("config line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct ConfigSection {
  std::string name;
  int line = 0;
  std::vector<std::pair<std::string, std::string>> entries;

  const std::string* find(const std::string& key) const;
};

std::vector<ConfigSection> parse_config(std::istream& in);

/// "1,2,3" -> {1, 2, 3}
std::vector<int> parse_int_list(const std::string& text);
/// "2..5" -> {2, 5}; a single integer n gives {n, n}.
std::pair<int, int> parse_level_range(const std::string& text);
/// "P1P2" -> 1 (the lower degree of an adjacent pair). Nedelec pairs may be
/// written "Nd1Nd2".
int parse_pair(const std::string& text);

/// One runnable job of a config file.
struct RunSpec {
  std::string label;  // section name
  bool adaptive = false;
  ExperimentConfig experiment;
  AdaptConfig adapt;
  std::string out;  // CSV path, empty for stdout
};

/// Keys: pair, smoother, method, m, levels, gamma, kappa, omega, theta,
/// mesh_files (one per level of the range, in order), out, dump_matrix;
/// adaptive_lshape sections use pair, m, theta, iters, initial_level,
/// smoother, out. Relative paths resolve against base_dir.
RunSpec run_spec_from_section(const ConfigSection& s, const std::filesystem::path& base_dir);

}  // namespace smoothsc
