#include "bartree/change_detector.hpp"

#include "bartree/error.hpp"

namespace bartree {

std::string_view to_string(CompareMode mode) noexcept {
  switch (mode) {
    case CompareMode::Simple: return "simple";
    case CompareMode::Full: return "full";
    case CompareMode::FullWithDelta: return "full-delta";
  }
  return "?";
}

std::string_view to_string(DeltaCase c) noexcept {
  switch (c) {
    case DeltaCase::NoChange: return "NoChange";
    case DeltaCase::SymmetricSimultaneous: return "SymmetricSimultaneous";
    case DeltaCase::UpperOnly: return "UpperOnly";
    case DeltaCase::LowerOnly: return "LowerOnly";
    case DeltaCase::BothDifferent: return "BothDifferent";
    case DeltaCase::NotEvaluated: return "NotEvaluated";
  }
  return "?";
}

std::string_view to_string(Action a) noexcept {
  switch (a) {
    case Action::Proceed: return "Proceed";
    case Action::ReExtractPattern: return "ReExtractPattern";
    case Action::DeferAndWarn: return "DeferAndWarn";
  }
  return "?";
}

std::optional<CompareMode> parse_compare_mode(std::string_view text) noexcept {
  for (auto mode : {CompareMode::Simple, CompareMode::Full, CompareMode::FullWithDelta}) {
    if (to_string(mode) == text) return mode;
  }
  return std::nullopt;
}

std::optional<DeltaCase> parse_delta_case(std::string_view text) noexcept {
  for (auto c : {DeltaCase::NoChange, DeltaCase::SymmetricSimultaneous,
                 DeltaCase::UpperOnly, DeltaCase::LowerOnly,
                 DeltaCase::BothDifferent, DeltaCase::NotEvaluated}) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

namespace {

void check_consistent(const Fingerprint& fp, std::string_view which) {
  if (fp.delta != fp.sigma_upper - fp.sigma_lower) {
    throw Error(ErrorCode::CorruptFingerprint,
                std::string(which) + " fingerprint has delta != sigma_upper - sigma_lower");
  }
}

}  // namespace

DeltaCase classify_delta_predicates(bool delta_equal, bool upper_equal,
                                    bool lower_equal) {
  if (delta_equal) {
    if (upper_equal && lower_equal) return DeltaCase::NoChange;
    if (!upper_equal && !lower_equal) return DeltaCase::SymmetricSimultaneous;
  } else {
    if (!upper_equal && lower_equal) return DeltaCase::UpperOnly;
    if (upper_equal && !lower_equal) return DeltaCase::LowerOnly;
    if (!upper_equal && !lower_equal) return DeltaCase::BothDifferent;
  }
  throw Error(ErrorCode::CorruptFingerprint,
              "delta/sigma predicates are arithmetically inconsistent");
}

DeltaCase classify_delta(const Fingerprint& old_fp, const Fingerprint& new_fp) {
  check_consistent(old_fp, "old");
  check_consistent(new_fp, "new");
  return classify_delta_predicates(old_fp.delta == new_fp.delta,
                                   old_fp.sigma_upper == new_fp.sigma_upper,
                                   old_fp.sigma_lower == new_fp.sigma_lower);
}

ChangeReport compare(const Fingerprint& old_fp, const Fingerprint& new_fp,
                     CompareMode mode) {
  if (!(old_fp.params == new_fp.params)) {
    throw Error(ErrorCode::ParamMismatch,
                "fingerprints were computed with different bar parameters");
  }
  ChangeReport report;
  report.mode = mode;
  auto note = [&](bool equal, const char* name) {
    if (!equal) report.differing.emplace_back(name);
  };

  note(old_fp.d_max == new_fp.d_max, "d_max");
  note(old_fp.A_total == new_fp.A_total, "A_total");
  if (mode != CompareMode::Simple) {
    note(old_fp.P == new_fp.P, "P");
    note(old_fp.A == new_fp.A, "A");
  }
  if (mode == CompareMode::FullWithDelta) {
    note(old_fp.delta == new_fp.delta, "delta");
    note(old_fp.sigma_upper == new_fp.sigma_upper, "sigma_upper");
    note(old_fp.sigma_lower == new_fp.sigma_lower, "sigma_lower");
    report.delta_case = classify_delta(old_fp, new_fp);
  }
  report.changed = !report.differing.empty();
  return report;
}

Action decide(const ChangeReport& report, bool roi_present) noexcept {
  if (!roi_present) return Action::DeferAndWarn;
  return report.changed ? Action::ReExtractPattern : Action::Proceed;
}

}  // namespace bartree
