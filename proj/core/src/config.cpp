#include "smoothsc/config.hpp"

#include <charconv>
#include <istream>
#include <set>

namespace smoothsc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int to_int(const std::string& text) {
  const std::string t = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw std::invalid_argument("not an integer: '" + text + "'");
  return v;
}

double to_double(const std::string& text) {
  const std::string t = trim(text);
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (t.empty() || pos != t.size()) throw std::invalid_argument("not a number: '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto p = text.find(sep, start);
    out.push_back(trim(text.substr(start, p - start)));
    if (p == std::string::npos) break;
    start = p + 1;
  }
  return out;
}

}  // namespace

const std::string* ConfigSection::find(const std::string& key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return &v;
  return nullptr;
}

std::vector<ConfigSection> parse_config(std::istream& in) {
  std::vector<ConfigSection> out;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(line, "unterminated section header");
      const std::string name = trim(s.substr(1, s.size() - 2));
      if (name.empty()) throw ConfigError(line, "empty section name");
      out.push_back({name, line, {}});
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected 'key = value'");
    if (out.empty()) throw ConfigError(line, "entry outside of a section");
    const std::string key = trim(s.substr(0, eq));
    if (key.empty()) throw ConfigError(line, "empty key");
    if (out.back().find(key)) throw ConfigError(line, "duplicate key '" + key + "'");
    out.back().entries.emplace_back(key, trim(s.substr(eq + 1)));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split(text, ',')) out.push_back(to_int(item));
  return out;
}

std::pair<int, int> parse_level_range(const std::string& text) {
  const auto p = text.find("..");
  if (p == std::string::npos) {
    const int n = to_int(text);
    return {n, n};
  }
  const int a = to_int(text.substr(0, p)), b = to_int(text.substr(p + 2));
  if (b < a) throw std::invalid_argument("empty level range '" + text + "'");
  return {a, b};
}

int parse_pair(const std::string& text) {
  const std::string t = trim(text);
  for (const std::string prefix : {"P", "Nd"}) {
    const std::size_t n = prefix.size();
    if (t.compare(0, n, prefix) != 0) continue;
    const auto second = t.find(prefix, n);
    if (second == std::string::npos) break;
    const int a = to_int(t.substr(n, second - n)), b = to_int(t.substr(second + n));
    if (b != a + 1 || a < 0) throw std::invalid_argument("pair must be adjacent degrees: '" + text + "'");
    return a;
  }
  throw std::invalid_argument("pair must look like P1P2 or Nd1Nd2: '" + text + "'");
}

RunSpec run_spec_from_section(const ConfigSection& s, const std::filesystem::path& base_dir) {
  static const std::set<std::string> uniform_keys{"pair",  "smoother", "method",     "m",   "levels",
                                                  "gamma", "kappa",    "omega",      "theta", "mesh_files",
                                                  "out",   "dump_matrix"};
  static const std::set<std::string> adaptive_keys{"pair", "m", "theta", "iters", "initial_level", "smoother", "out"};
  RunSpec r;
  r.label = s.name;
  const std::string id_text = s.name.substr(0, s.name.find('.'));
  const CaseId id = [&] {
    try {
      return parse_case(id_text);
    } catch (const std::exception& e) {
      throw ConfigError(s.line, e.what());
    }
  }();
  r.adaptive = id == CaseId::adaptive_lshape;
  const auto& allowed = r.adaptive ? adaptive_keys : uniform_keys;
  auto resolve = [&](const std::string& path) { return (base_dir / path).lexically_normal().string(); };
  try {
    for (const auto& [key, value] : s.entries)
      if (!allowed.count(key)) throw std::invalid_argument("unknown key '" + key + "'");
    if (auto v = s.find("out")) r.out = resolve(*v);
    if (r.adaptive) {
      AdaptConfig& a = r.adapt;
      if (auto v = s.find("pair")) a.k = parse_pair(*v);
      if (auto v = s.find("m")) a.m = to_int(*v);
      if (auto v = s.find("theta")) a.theta = to_double(*v);
      if (auto v = s.find("iters")) a.max_iters = to_int(*v);
      if (auto v = s.find("initial_level")) a.initial_level = to_int(*v);
      if (auto v = s.find("smoother")) {
        const SmootherChoice c = resolve_smoother(*v, 2.0 / 3.0);
        a.smoother = c.kind;
        a.method = c.method;
      }
      return r;
    }
    ExperimentConfig& e = r.experiment;
    e.id = id;
    if (auto v = s.find("pair")) e.k = parse_pair(*v);
    if (auto v = s.find("smoother")) e.smoother = *v;
    if (auto v = s.find("method")) e.method = parse_method(*v);
    if (auto v = s.find("m")) e.ms = parse_int_list(*v);
    if (auto v = s.find("levels")) std::tie(e.level_min, e.level_max) = parse_level_range(*v);
    if (auto v = s.find("gamma")) e.params.gamma = to_double(*v);
    if (auto v = s.find("kappa")) e.params.kappa = to_double(*v);
    if (auto v = s.find("omega")) e.params.omega = to_double(*v);
    if (auto v = s.find("theta")) e.params.theta = to_double(*v);
    if (auto v = s.find("dump_matrix")) e.dump_matrix_dir = resolve(*v);
    if (auto v = s.find("mesh_files")) {
      const auto files = split(*v, ',');
      if (static_cast<int>(files.size()) != e.level_max - e.level_min + 1)
        throw std::invalid_argument("mesh_files needs one file per level");
      e.params.mesh_files.assign(e.level_min, std::string());
      for (const auto& f : files) e.params.mesh_files.push_back(resolve(f));
    }
    resolve_smoother(e.smoother, e.params.omega);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ConfigError(s.line, "[" + s.name + "] " + ex.what());
  }
  return r;
}

}  // namespace smoothsc
