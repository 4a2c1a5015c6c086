#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bartree/bar_tree.hpp"
#include "bartree/change_detector.hpp"
#include "bartree/fetch.hpp"
#include "bartree/reverse_tree.hpp"
#include "bartree/store.hpp"

namespace bartree {

// Everything the reverse pass derives from one page.
struct PageAnalysis {
  TagStream stream;  // text-format tags stripped, text kept
  RoiSpan roi;
  std::vector<std::pair<std::string, RoiSpan>> attributes;
  Parts parts;
  TagCounts upper;
  TagCounts lower;
  DepthProfile profile;
};

// tokenize -> locate RoI and attributes -> split -> count both parts ->
// depth profile. Propagates NotFound, Ambiguous, SubRoiNotFound and
// DegenerateProfile (unless `allow_degenerate`, which yields d_max = 0).
PageAnalysis analyze_page(std::string_view html, const RoiSpec& spec,
                          const TagConfig& tags = TagConfig::defaults(),
                          bool allow_degenerate = false);

// Builds a fresh record for `config` from page bytes without touching any
// store.
TargetRecord build_record(const TargetConfig& config, std::string_view html,
                          std::string captured_at);

struct CheckResult {
  ChangeReport report;
  Action action = Action::Proceed;
  bool roi_present = true;
  // Set when action == ReExtractPattern.
  std::optional<TargetRecord> replacement;
  std::string message;
};

// Re-runs the pipeline for `record` on `html` and compares against the
// stored fingerprint in `mode`. Pure: never touches a store.
CheckResult recheck(const TargetRecord& record, std::string_view html,
                    CompareMode mode, std::string captured_at);

struct LabeledRecord {
  std::string source_url;
  std::string extracted_at;
  std::map<std::string, std::string> fields;
  std::vector<std::string> warnings;  // labels whose anchors did not match
};

// Applies stored attribute anchors to a page. Throws Error(PatternStale)
// when none matches.
LabeledRecord extract_with(const TargetRecord& record, std::string_view html,
                           std::string source_url, std::string extracted_at);

struct HarvestOptions {
  std::size_t history_limit = 5;
  std::function<std::string()> clock = utc_timestamp;
};

// Owns the target registry. Fetches run outside the registry lock, so
// checks on distinct targets may fetch in parallel; every registry
// mutation is serialized and, when a store path is set, persisted
// atomically before the call returns.
class Harvester {
 public:
  Harvester(PageSource& source, Registry registry = {},
            std::optional<std::filesystem::path> store_path = std::nullopt,
            HarvestOptions options = {});

  // Loads `store_path` if it exists, otherwise starts empty.
  static Harvester open(PageSource& source, const std::filesystem::path& store_path,
                        HarvestOptions options = {});

  TargetRecord register_target(const TargetConfig& config);
  TargetRecord register_target(const TargetConfig& config, std::string_view html);

  CheckResult check_target(const std::string& target_id);
  CheckResult check_target(const std::string& target_id, std::string_view html);
  CheckResult check_target(const std::string& target_id, std::string_view html,
                           CompareMode mode);

  LabeledRecord extract_record(const std::string& target_id);
  LabeledRecord extract_record(const std::string& target_id, std::string_view html,
                               std::string source_url = {});

  Registry snapshot() const;
  TargetRecord record(const std::string& target_id) const;

 private:
  TargetRecord insert(TargetRecord record);
  CheckResult apply_check(const std::string& target_id, const TargetRecord& seen,
                          CheckResult result);
  void persist_locked();

  PageSource& source_;
  mutable std::mutex mutex_;
  Registry registry_;
  std::optional<std::filesystem::path> store_path_;
  HarvestOptions options_;
};

}  // namespace bartree
