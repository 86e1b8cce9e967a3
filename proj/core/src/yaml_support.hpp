#pragma once

#include <yaml-cpp/yaml.h>

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include "pplnhom/errors.hpp"

namespace pplnhom::detail {

inline std::string location(std::string_view origin, const YAML::Mark& mark) {
  std::string out(origin);
  if (mark.line >= 0) {
    out += ":" + std::to_string(mark.line + 1) + ":" + std::to_string(mark.column + 1);
  }
  return out;
}

/// Mapping node reader that rejects keys it was never asked about.
class StrictMap {
 public:
  StrictMap(YAML::Node node, std::string section, std::string_view origin)
      : node_(std::move(node)), section_(std::move(section)), origin_(origin) {
    if (!node_.IsMap()) fail(node_, "expected a mapping");
  }

  bool has(const std::string& key) const { return static_cast<bool>(node_[key]); }

  template <typename T>
  T required(const std::string& key) {
    auto child = std::as_const(node_)[key];
    if (!child) fail(node_, "missing required key '" + key + "'");
    seen_.insert(key);
    return convert<T>(child, key);
  }

  template <typename T>
  T get(const std::string& key, T fallback) {
    auto child = std::as_const(node_)[key];
    if (!child) return fallback;
    seen_.insert(key);
    return convert<T>(child, key);
  }

  std::optional<StrictMap> section(const std::string& key) {
    auto child = std::as_const(node_)[key];
    if (!child) return std::nullopt;
    seen_.insert(key);
    return StrictMap(child, section_.empty() ? key : section_ + "." + key, origin_);
  }

  YAML::Node raw(const std::string& key) {
    seen_.insert(key);
    return std::as_const(node_)[key];
  }

  /// Throws on any key that was not consumed.
  void finish() const {
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!seen_.count(key)) {
        throw ConfigError(location(origin_, kv.first.Mark()) + ": unknown key '" + key + "'" +
                          (section_.empty() ? "" : " in section '" + section_ + "'"));
      }
    }
  }

  [[noreturn]] void fail(const YAML::Node& at, const std::string& what) const {
    const YAML::Mark mark = at ? at.Mark() : node_.Mark();
    throw ConfigError(location(origin_, mark) + ": " +
                      (section_.empty() ? "" : section_ + ": ") + what);
  }

  std::string_view origin() const { return origin_; }

 private:
  template <typename T>
  T convert(const YAML::Node& child, const std::string& key) const {
    try {
      return child.as<T>();
    } catch (const YAML::Exception&) {
      fail(child, "key '" + key + "' has the wrong type");
    }
  }

  YAML::Node node_;
  std::string section_;
  std::string origin_;
  std::set<std::string> seen_;
};

inline YAML::Node parse_document(std::string_view text, std::string_view origin) {
  try {
    return YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError(location(origin, e.mark) + ": " + e.msg);
  }
}

}  // namespace pplnhom::detail
