#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bartree/bar_tree.hpp"

namespace bartree {

// Simple compares {d_max, A_total}; Full adds {P, A}; FullWithDelta adds
// {delta, sigma_upper, sigma_lower}.
enum class CompareMode { Simple, Full, FullWithDelta };

enum class DeltaCase {
  NoChange,
  SymmetricSimultaneous,
  UpperOnly,
  LowerOnly,
  BothDifferent,
  NotEvaluated,
};

enum class Action { Proceed, ReExtractPattern, DeferAndWarn };

std::string_view to_string(CompareMode mode) noexcept;  // simple|full|full-delta
std::string_view to_string(DeltaCase c) noexcept;
std::string_view to_string(Action a) noexcept;
std::optional<CompareMode> parse_compare_mode(std::string_view text) noexcept;
std::optional<DeltaCase> parse_delta_case(std::string_view text) noexcept;

struct ChangeReport {
  bool changed = false;
  // Variable names in fingerprint order: d_max, A_total, P, A, delta,
  // sigma_upper, sigma_lower.
  std::vector<std::string> differing;
  DeltaCase delta_case = DeltaCase::NotEvaluated;
  CompareMode mode = CompareMode::Simple;

  friend bool operator==(const ChangeReport&, const ChangeReport&) = default;
};

// Throws Error(ParamMismatch) if the fingerprints use different I or r, and
// Error(CorruptFingerprint) in FullWithDelta mode when a fingerprint breaks
// delta == sigma_upper - sigma_lower.
ChangeReport compare(const Fingerprint& old_fp, const Fingerprint& new_fp,
                     CompareMode mode);

DeltaCase classify_delta(const Fingerprint& old_fp, const Fingerprint& new_fp);

// Pure table over the three equality predicates. The three combinations
// with an equal delta and exactly one changed sigma cannot arise from
// consistent fingerprints and throw Error(CorruptFingerprint).
DeltaCase classify_delta_predicates(bool delta_equal, bool upper_equal,
                                    bool lower_equal);

Action decide(const ChangeReport& report, bool roi_present) noexcept;

}  // namespace bartree
