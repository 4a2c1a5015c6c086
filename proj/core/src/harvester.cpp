#include "bartree/harvester.hpp"

#include <spdlog/spdlog.h>

#include "bartree/error.hpp"
#include "bartree/layout_tree.hpp"

namespace bartree {
namespace {

bool is_missing_content(ErrorCode code) {
  return code == ErrorCode::NotFound || code == ErrorCode::Ambiguous ||
         code == ErrorCode::SubRoiNotFound;
}

std::vector<std::pair<std::string, AttributeAnchor>> anchors_for(
    const PageAnalysis& analysis) {
  const LayoutTree tree(analysis.stream);
  std::vector<std::pair<std::string, AttributeAnchor>> anchors;
  for (const auto& [label, span] : analysis.attributes) {
    anchors.emplace_back(label, make_anchor(analysis.stream, tree, span));
  }
  return anchors;
}

// Report for a recheck whose stored parameters no longer satisfy the ratio
// bound: the template grew deeper, so A and A_total are not comparable.
ChangeReport report_for_param_overflow(const Fingerprint& old_fp,
                                       const Fingerprint& new_fp,
                                       CompareMode mode) {
  ChangeReport report;
  report.mode = mode;
  report.differing = {"d_max", "A_total"};
  if (mode != CompareMode::Simple) {
    if (old_fp.P != new_fp.P) report.differing.emplace_back("P");
    report.differing.emplace_back("A");
  }
  if (mode == CompareMode::FullWithDelta) {
    if (old_fp.delta != new_fp.delta) report.differing.emplace_back("delta");
    if (old_fp.sigma_upper != new_fp.sigma_upper) report.differing.emplace_back("sigma_upper");
    if (old_fp.sigma_lower != new_fp.sigma_lower) report.differing.emplace_back("sigma_lower");
    report.delta_case = classify_delta(old_fp, new_fp);
  }
  report.changed = true;
  return report;
}

}  // namespace

PageAnalysis analyze_page(std::string_view html, const RoiSpec& spec,
                          const TagConfig& tags, bool allow_degenerate) {
  PageAnalysis a;
  a.stream = clean(tokenize(html, tags), CleanPolicy::StripTextFormat);
  a.roi = locate_roi(a.stream, spec);
  a.attributes = locate_subrois(a.stream, a.roi, spec);
  a.parts = split(a.stream, a.roi);
  a.upper = count_tags(a.parts.upper, Side::Upper);
  a.lower = count_tags(a.parts.lower, Side::Lower);
  try {
    a.profile = depth_profile(a.parts);
  } catch (const Error& e) {
    if (!allow_degenerate || e.code() != ErrorCode::DegenerateProfile) throw;
    a.profile = DepthProfile{};
  }
  return a;
}

TargetRecord build_record(const TargetConfig& config, std::string_view html,
                          std::string captured_at) {
  const RoiSpec spec = config.roi_spec();
  const PageAnalysis a = analyze_page(html, spec, config.tag_config());
  const BarParams params = config.params_for(a.profile.d_max);
  params.validate(a.profile.d_max);

  TargetRecord record;
  record.config = config;
  record.fingerprint = fingerprint(a.profile, a.upper.sigma, a.lower.sigma, params,
                                   spec.roi_text, std::move(captured_at));
  record.anchors = anchors_for(a);
  return record;
}

CheckResult recheck(const TargetRecord& record, std::string_view html,
                    CompareMode mode, std::string captured_at) {
  CheckResult result;
  result.report.mode = mode;

  const RoiSpec spec = record.config.roi_spec();
  PageAnalysis a;
  try {
    a = analyze_page(html, spec, record.config.tag_config(), true);
  } catch (const Error& e) {
    if (!is_missing_content(e.code())) throw;
    result.roi_present = false;
    result.action = Action::DeferAndWarn;
    result.message = "RoI content missing for target '" + record.config.target_id +
                     "' (" + e.what() + "); choose another RoI text";
    return result;
  }

  const Fingerprint& old_fp = record.fingerprint;
  const BarParams& stored = old_fp.params;
  const std::size_t d_max = a.profile.d_max;
  if (stored.valid_for(d_max)) {
    const Fingerprint new_fp = fingerprint(a.profile, a.upper.sigma, a.lower.sigma,
                                           stored, spec.roi_text, captured_at);
    result.report = compare(old_fp, new_fp, mode);
  } else {
    Fingerprint probe;
    probe.d_max = d_max;
    probe.P = a.profile.P;
    probe.sigma_upper = a.upper.sigma;
    probe.sigma_lower = a.lower.sigma;
    probe.delta = a.upper.sigma - a.lower.sigma;
    result.report = report_for_param_overflow(old_fp, probe, mode);
  }

  result.action = decide(result.report, true);
  if (result.action == Action::ReExtractPattern) {
    TargetRecord replacement;
    replacement.config = record.config;
    const BarParams params = record.config.params_for(d_max);
    params.validate(d_max);
    replacement.fingerprint = fingerprint(a.profile, a.upper.sigma, a.lower.sigma,
                                          params, spec.roi_text, std::move(captured_at));
    replacement.anchors = anchors_for(a);
    replacement.history = record.history;
    replacement.history.push_back(old_fp);
    result.replacement = std::move(replacement);
    result.message = "template change detected for target '" +
                     record.config.target_id + "' (" +
                     std::string(to_string(result.report.delta_case)) +
                     "); pattern re-extracted";
  }
  return result;
}

LabeledRecord extract_with(const TargetRecord& record, std::string_view html,
                           std::string source_url, std::string extracted_at) {
  const TagStream stream =
      clean(tokenize(html, record.config.tag_config()), CleanPolicy::StripTextFormat);
  const LayoutTree tree(stream);

  LabeledRecord out;
  out.source_url = std::move(source_url);
  out.extracted_at = std::move(extracted_at);
  for (const auto& [label, anchor] : record.anchors) {
    if (auto text = apply_anchor(stream, tree, anchor)) {
      out.fields.emplace(label, std::move(*text));
    } else {
      out.warnings.push_back(label);
    }
  }
  if (out.fields.empty()) {
    throw Error(ErrorCode::PatternStale,
                "no attribute anchor of target '" + record.config.target_id +
                    "' matched; run a check");
  }
  return out;
}

Harvester::Harvester(PageSource& source, Registry registry,
                     std::optional<std::filesystem::path> store_path,
                     HarvestOptions options)
    : source_(source),
      registry_(std::move(registry)),
      store_path_(std::move(store_path)),
      options_(std::move(options)) {}

Harvester Harvester::open(PageSource& source, const std::filesystem::path& store_path,
                          HarvestOptions options) {
  Registry registry;
  if (std::filesystem::exists(store_path)) registry = store_load(store_path);
  return Harvester(source, std::move(registry), store_path, std::move(options));
}

Registry Harvester::snapshot() const {
  std::lock_guard lock(mutex_);
  return registry_;
}

TargetRecord Harvester::record(const std::string& target_id) const {
  std::lock_guard lock(mutex_);
  const auto it = registry_.targets.find(target_id);
  if (it == registry_.targets.end()) {
    throw Error(ErrorCode::UnknownTarget, "unknown target '" + target_id + "'");
  }
  return it->second;
}

void Harvester::persist_locked() {
  if (store_path_) store_save(registry_, *store_path_);
}

TargetRecord Harvester::insert(TargetRecord record) {
  std::lock_guard lock(mutex_);
  const std::string id = record.config.target_id;
  if (registry_.targets.contains(id)) {
    throw Error(ErrorCode::DuplicateTarget, "target '" + id + "' already registered");
  }
  registry_.targets.emplace(id, record);
  try {
    persist_locked();
  } catch (...) {
    registry_.targets.erase(id);
    throw;
  }
  return record;
}

TargetRecord Harvester::register_target(const TargetConfig& config) {
  {
    std::lock_guard lock(mutex_);
    if (registry_.targets.contains(config.target_id)) {
      throw Error(ErrorCode::DuplicateTarget,
                  "target '" + config.target_id + "' already registered");
    }
  }
  parse_url(config.url);
  const FetchResult page = source_.fetch(config.url);
  return register_target(config, page.body);
}

TargetRecord Harvester::register_target(const TargetConfig& config,
                                        std::string_view html) {
  if (config.target_id.empty()) {
    throw Error(ErrorCode::InvalidInput, "target id is empty");
  }
  parse_url(config.url);
  {
    std::lock_guard lock(mutex_);
    if (registry_.targets.contains(config.target_id)) {
      throw Error(ErrorCode::DuplicateTarget,
                  "target '" + config.target_id + "' already registered");
    }
  }
  TargetRecord record = build_record(config, html, options_.clock());
  record = insert(std::move(record));
  spdlog::info("registered target '{}' (d_max={}, delta={})", config.target_id,
               record.fingerprint.d_max, record.fingerprint.delta);
  return record;
}

CheckResult Harvester::apply_check(const std::string& target_id,
                                   const TargetRecord& seen, CheckResult result) {
  if (result.action == Action::DeferAndWarn) {
    spdlog::warn("{}", result.message);
    return result;
  }
  if (result.action != Action::ReExtractPattern || !result.replacement) return result;

  auto& history = result.replacement->history;
  if (history.size() > options_.history_limit) {
    history.erase(history.begin(),
                  history.end() - static_cast<long>(options_.history_limit));
  }
  std::lock_guard lock(mutex_);
  auto it = registry_.targets.find(target_id);
  if (it == registry_.targets.end()) {
    throw Error(ErrorCode::UnknownTarget, "target '" + target_id + "' was removed");
  }
  if (!(it->second.fingerprint == seen.fingerprint)) {
    // Another check replaced the pattern meanwhile; keep its history too.
    result.replacement->history = it->second.history;
    result.replacement->history.push_back(it->second.fingerprint);
    if (result.replacement->history.size() > options_.history_limit) {
      auto& h = result.replacement->history;
      h.erase(h.begin(), h.end() - static_cast<long>(options_.history_limit));
    }
  }
  const TargetRecord previous = it->second;
  it->second = *result.replacement;
  try {
    persist_locked();
  } catch (...) {
    it->second = previous;
    throw;
  }
  spdlog::info("{}", result.message);
  return result;
}

CheckResult Harvester::check_target(const std::string& target_id) {
  const TargetRecord seen = record(target_id);
  std::string body;
  try {
    body = source_.fetch(seen.config.url).body;
  } catch (const Error& e) {
    if (!e.is_fetch_error()) throw;
    CheckResult result;
    result.report.mode = seen.config.mode;
    result.roi_present = false;
    result.action = Action::DeferAndWarn;
    result.message = "fetch failed for target '" + target_id + "': " + e.what();
    return apply_check(target_id, seen, std::move(result));
  }
  return apply_check(target_id, seen,
                     recheck(seen, body, seen.config.mode, options_.clock()));
}

CheckResult Harvester::check_target(const std::string& target_id, std::string_view html) {
  const TargetRecord seen = record(target_id);
  return apply_check(target_id, seen,
                     recheck(seen, html, seen.config.mode, options_.clock()));
}

CheckResult Harvester::check_target(const std::string& target_id, std::string_view html,
                                    CompareMode mode) {
  const TargetRecord seen = record(target_id);
  return apply_check(target_id, seen, recheck(seen, html, mode, options_.clock()));
}

LabeledRecord Harvester::extract_record(const std::string& target_id) {
  const TargetRecord seen = record(target_id);
  const FetchResult page = source_.fetch(seen.config.url);
  return extract_with(seen, page.body, page.final_url, options_.clock());
}

LabeledRecord Harvester::extract_record(const std::string& target_id,
                                        std::string_view html, std::string source_url) {
  const TargetRecord seen = record(target_id);
  if (source_url.empty()) source_url = seen.config.url;
  return extract_with(seen, html, std::move(source_url), options_.clock());
}

}  // namespace bartree
