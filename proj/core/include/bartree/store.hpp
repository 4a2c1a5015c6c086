#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bartree/bar_tree.hpp"
#include "bartree/change_detector.hpp"
#include "bartree/html_lexer.hpp"
#include "bartree/layout_tree.hpp"
#include "bartree/roi_locator.hpp"

namespace bartree {

// Optional replacements for the default tag-class lists.
struct TagClassOverrides {
  std::optional<std::vector<std::string>> text_format;
  std::optional<std::vector<std::string>> layout_format;
  std::optional<std::vector<std::string>> void_tags;

  bool empty() const noexcept {
    return !text_format && !layout_format && !void_tags;
  }
  TagConfig apply(const TagConfig& base = TagConfig::defaults()) const;

  friend bool operator==(const TagClassOverrides&, const TagClassOverrides&) = default;
};

struct TargetConfig {
  std::string target_id;
  std::string url;
  std::string roi_file;
  std::string roi_text;  // contents of roi_file, carried into the store
  std::vector<RoiAttribute> attributes;
  std::optional<std::size_t> occurrence;
  std::optional<Rational> I;
  std::optional<Rational> r;
  TagClassOverrides tag_classes;
  CompareMode mode = CompareMode::FullWithDelta;

  RoiSpec roi_spec() const;
  TagConfig tag_config() const { return tag_classes.apply(); }
  // Configured I and r; whichever is missing comes from
  // BarParams::defaults_for(d_max).
  BarParams params_for(std::size_t d_max) const;

  friend bool operator==(const TargetConfig&, const TargetConfig&) = default;
};

struct TargetRecord {
  TargetConfig config;
  Fingerprint fingerprint;
  std::vector<std::pair<std::string, AttributeAnchor>> anchors;  // config order
  std::vector<Fingerprint> history;  // replaced fingerprints, oldest first

  friend bool operator==(const TargetRecord&, const TargetRecord&) = default;
};

struct Registry {
  std::map<std::string, TargetRecord> targets;

  friend bool operator==(const Registry&, const Registry&) = default;
};

inline constexpr int kStoreSchemaVersion = 1;

// Reads a target config JSON file and the RoI text it points to (relative
// paths resolve against the config's directory). Missing or unreadable
// files throw Error(InvalidInput).
TargetConfig load_target_config(const std::filesystem::path& path);

// Throws Error(CorruptStore) with the offending line or JSON field path.
Registry store_load(const std::filesystem::path& path);

// Writes to a temporary sibling file and renames it over `path`.
void store_save(const Registry& registry, const std::filesystem::path& path);

}  // namespace bartree
