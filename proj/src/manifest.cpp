#include <cctype>
#include <sstream>

#include "cfgrank/errors.hpp"
#include "cfgrank/frontend.hpp"

namespace cfgrank {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string strip_comment(const std::string& line) {
  bool in_str = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (c == '\\' && in_str) {
      ++i;
    } else if (c == '"') {
      in_str = !in_str;
    } else if (c == '#' && !in_str) {
      return line.substr(0, i);
    }
  }
  return line;
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

std::vector<std::string> string_array(const std::string& value) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    char q = value[i];
    if (q != '"' && q != '\'') continue;
    std::string item;
    for (++i; i < value.size() && value[i] != q; ++i) {
      if (value[i] == '\\' && i + 1 < value.size()) ++i;
      item.push_back(value[i]);
    }
    out.push_back(item);
  }
  return out;
}

int bracket_balance(const std::string& s) {
  int depth = 0;
  bool in_str = false;
  for (char c : s) {
    if (c == '"') in_str = !in_str;
    if (in_str) continue;
    if (c == '[') ++depth;
    if (c == ']') --depth;
  }
  return depth;
}

// Entries like `dep:serde` or `serde/std` enable dependency features, not
// features of this package.
bool is_dependency_ref(const std::string& s) {
  return s.find(':') != std::string::npos || s.find('/') != std::string::npos;
}

}  // namespace

std::set<std::string> Manifest::all_features() const {
  std::set<std::string> out(implicit_features);
  for (const auto& [name, deps] : features) out.insert(name);
  out.insert(default_features.begin(), default_features.end());
  return out;
}

Manifest parse_manifest(std::string_view text) {
  Manifest m;
  std::istringstream in{std::string(text)};
  std::string section;
  std::string line;
  int features_tables = 0;
  std::set<std::string> seen_keys;

  while (std::getline(in, line)) {
    std::string t = trim(strip_comment(line));
    if (t.empty()) continue;
    if (t.front() == '[' && t.rfind("[[", 0) != 0 && t.back() == ']') {
      section = trim(t.substr(1, t.size() - 2));
      if (section == "features" && ++features_tables > 1) {
        throw ManifestError("more than one [features] table");
      }
      continue;
    }
    if (t.rfind("[[", 0) == 0) {
      section = "<array-table>";
      continue;
    }
    auto eq = t.find('=');
    if (eq == std::string::npos) continue;
    std::string key = unquote(trim(t.substr(0, eq)));
    std::string value = trim(t.substr(eq + 1));
    while (bracket_balance(value) > 0 && std::getline(in, line)) {
      value += " " + trim(strip_comment(line));
    }

    if (section == "package" && key == "name") {
      m.package_name = unquote(value);
    } else if (section == "workspace" && key == "members") {
      m.workspace_members = string_array(value);
    } else if (section == "features") {
      if (!seen_keys.insert(key).second) throw ManifestError("duplicate feature key '" + key + "'");
      std::vector<std::string> deps;
      for (auto& d : string_array(value)) {
        if (!is_dependency_ref(d)) deps.push_back(std::move(d));
      }
      if (key == "default") {
        m.default_features = std::move(deps);
      } else {
        m.features[key] = std::move(deps);
      }
    }
  }

  auto note_implicit = [&](const std::string& f) {
    if (!m.features.count(f)) m.implicit_features.insert(f);
  };
  for (const auto& [name, deps] : m.features) {
    for (const auto& d : deps) note_implicit(d);
  }
  for (const auto& d : m.default_features) note_implicit(d);
  return m;
}

}  // namespace cfgrank
