#include <gtest/gtest.h>

#include <random>

#include "bartree/harvester.hpp"
#include "bartree/serialization.hpp"
#include "bartree/synth.hpp"

namespace bartree {
namespace {

constexpr const char* kStamp = "2001-01-01T00:00:00Z";

TargetConfig config_for(const SynthPage& page) {
  TargetConfig c;
  c.target_id = "synthetic";
  c.url = "http://synthetic.example/";
  c.roi_text = page.roi_text;
  return c;
}

// End-to-end over generated templates: an unchanged page is never flagged,
// every structural edit is flagged by the delta-aware mode, and the modes
// are nested.
TEST(Properties, ModesAreNestedAndDeltaModeMissesNothing) {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const SynthPage page = generate_template(1 + rng() % 25, rng());
    const TargetRecord rec = build_record(config_for(page), page.html, kStamp);
    for (CompareMode mode : {CompareMode::Simple, CompareMode::Full, CompareMode::FullWithDelta}) {
      ASSERT_FALSE(recheck(rec, page.html, mode, kStamp).report.changed);
    }
    const auto m = random_mutation(page, rng);
    if (!m) continue;
    const std::string edited = mutate(page, *m, rng()).html;
    const bool simple = recheck(rec, edited, CompareMode::Simple, kStamp).report.changed;
    const bool full = recheck(rec, edited, CompareMode::Full, kStamp).report.changed;
    const CheckResult delta = recheck(rec, edited, CompareMode::FullWithDelta, kStamp);
    EXPECT_TRUE(!simple || full);
    EXPECT_TRUE(!full || delta.report.changed);
    EXPECT_TRUE(delta.report.changed) << to_string(m->kind) << " at depth " << m->depth;
    EXPECT_EQ(delta.action, Action::ReExtractPattern);
    if (m->kind != MutationKind::PermuteSiblings) {
      EXPECT_TRUE(full) << to_string(m->kind);
    } else {
      EXPECT_FALSE(full);
      EXPECT_EQ(delta.report.differing,
                (std::vector<std::string>{"delta", "sigma_upper", "sigma_lower"}));
    }
    if (m->kind == MutationKind::SymmetricDualEdit) {
      EXPECT_EQ(delta.report.delta_case, DeltaCase::SymmetricSimultaneous);
    }
    ++checked;
  }
  EXPECT_GT(checked, 250);
}

TEST(Properties, ReplacementMatchesFreshRegistration) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 60; ++i) {
    const SynthPage page = generate_template(2 + rng() % 20, rng());
    const auto m = random_mutation(page, rng);
    if (!m) continue;
    const std::string edited = mutate(page, *m, rng()).html;
    const TargetRecord rec = build_record(config_for(page), page.html, kStamp);
    const CheckResult r = recheck(rec, edited, CompareMode::FullWithDelta, kStamp);
    ASSERT_TRUE(r.replacement);
    TargetRecord fresh = build_record(config_for(page), edited, kStamp);
    fresh.history.push_back(rec.fingerprint);
    EXPECT_EQ(*r.replacement, fresh);
  }
}

TEST(Properties, RecordsSurviveJsonRoundTrip) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 100; ++i) {
    const SynthPage page = generate_template(1 + rng() % 25, rng());
    const TargetRecord rec = build_record(config_for(page), page.html, kStamp);
    const Json j = to_json(rec);
    EXPECT_EQ(target_record_from_json(Json::parse(j.dump())), rec);
  }
}

}  // namespace
}  // namespace bartree
