#pragma once

// Shared helpers for the YAML-backed readers (config and scene files).

#include <initializer_list>
#include <optional>
#include <set>
#include <string>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "r2usbl/config.hpp"

namespace r2usbl::config::yaml_read {

inline std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

inline int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

/// Rejects duplicate and unknown keys of one mapping.
inline void check_map(const YAML::Node& node, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!node.IsMap()) throw ConfigError(Errc::ValidationError, path, "expected a mapping", line_of(node));
  std::set<std::string> seen;
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!seen.insert(key).second) {
      throw ConfigError(Errc::ParseError, join(path, key), "duplicate key", line_of(kv.first));
    }
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError(Errc::UnknownKey, join(path, key), "unknown key", line_of(kv.first));
  }
}

template <typename T>
T scalar(const YAML::Node& n, const std::string& key, const char* expected) {
  if (!n.IsScalar()) throw ConfigError(Errc::ValidationError, key, fmt::format("expected {}", expected), line_of(n));
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(Errc::ValidationError, key, fmt::format("expected {}", expected), line_of(n));
  }
}

inline void read(const YAML::Node& parent, const char* name, const std::string& path, double& out) {
  if (const auto n = parent[name]) out = scalar<double>(n, join(path, name), "a number");
}

inline void read(const YAML::Node& parent, const char* name, const std::string& path, bool& out) {
  if (const auto n = parent[name]) out = scalar<bool>(n, join(path, name), "true or false");
}

inline void read(const YAML::Node& parent, const char* name, const std::string& path, std::size_t& out) {
  if (const auto n = parent[name]) {
    const auto v = scalar<long long>(n, join(path, name), "an integer");
    if (v < 0) throw ConfigError(Errc::ValidationError, join(path, name), "must be non-negative", line_of(n));
    out = static_cast<std::size_t>(v);
  }
}

inline void read(const YAML::Node& parent, const char* name, const std::string& path, std::optional<double>& out) {
  if (const auto n = parent[name]) out = scalar<double>(n, join(path, name), "a number");
}

inline void read(const YAML::Node& parent, const char* name, const std::string& path, std::string& out) {
  if (const auto n = parent[name]) out = scalar<std::string>(n, join(path, name), "a string");
}

}  // namespace r2usbl::config::yaml_read
