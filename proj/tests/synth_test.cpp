#include <gtest/gtest.h>

#include <functional>
#include <map>

#include "bartree/bar_tree.hpp"
#include "bartree/error.hpp"
#include "bartree/harvester.hpp"
#include "bartree/synth.hpp"

namespace bartree {
namespace {

PageAnalysis analyze(const SynthPage& page) {
  return analyze_page(page.html, RoiSpec::make(page.roi_text));
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::InvalidInput;
}

TEST(Synth, SmallTemplateMatchesPipeline) {
  const SynthPage page = generate_template(5, 1);
  EXPECT_EQ(page.truth.d_max, 5u);
  EXPECT_EQ(page.truth.P[0], 1u);
  EXPECT_EQ(analyze(page).profile, page.truth);
}

TEST(Synth, TruthMatchesPipelineAcrossDepths) {
  for (std::size_t d_max = 1; d_max <= 25; ++d_max) {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      const SynthPage page = generate_template(d_max, seed);
      ASSERT_EQ(page.truth.d_max, d_max);
      for (std::size_t d = 1; d < d_max; ++d) {
        EXPECT_GE(page.truth.P[d], 1u);
        EXPECT_LE(page.truth.P[d], 4u);
      }
      ASSERT_EQ(analyze(page).profile, page.truth) << "d_max=" << d_max << " seed=" << seed;
    }
  }
}

TEST(Synth, Deterministic) {
  EXPECT_EQ(generate_template(9, 42).html, generate_template(9, 42).html);
  EXPECT_NE(generate_template(9, 42).html, generate_template(9, 43).html);
  const SynthPage p = generate_template(9, 42);
  const Mutation m{MutationKind::InsertNode, EditSide::Lower, 3};
  EXPECT_EQ(mutate(p, m, 5).html, mutate(p, m, 5).html);
}

TEST(Synth, RejectsBadArguments) {
  EXPECT_EQ(code_of([] { generate_template(0, 1); }), ErrorCode::InvalidInput);
  EXPECT_EQ(code_of([] { generate_template(26, 1); }), ErrorCode::InvalidInput);
  EXPECT_EQ(code_of([] { generate_with_counts({2, 1}, 1); }), ErrorCode::InvalidInput);
  EXPECT_EQ(code_of([] { generate_with_counts({1, 0, 1}, 1); }), ErrorCode::InvalidInput);
  EXPECT_EQ(code_of([] { make_collision_pair(2, 1); }), ErrorCode::InvalidInput);
}

TEST(Synth, InsertAddsOneNodeAndOnePair) {
  const SynthPage page = generate_with_counts({1, 2, 2, 3, 2}, 11);
  const PageAnalysis before = analyze(page);
  for (const EditSide side : {EditSide::Upper, EditSide::Lower}) {
    SynthPage edited;
    try {
      edited = mutate(page, {MutationKind::InsertNode, side, 2}, 3);
    } catch (const Error& e) {
      ASSERT_EQ(e.code(), ErrorCode::Inapplicable);
      continue;
    }
    const PageAnalysis after = analyze(edited);
    EXPECT_EQ(after.profile, edited.truth);
    EXPECT_EQ(after.profile.P[2], before.profile.P[2] + 1);
    const bool upper = side == EditSide::Upper;
    EXPECT_EQ(after.upper.sigma, before.upper.sigma - (upper ? 1 : 0));
    EXPECT_EQ(after.lower.sigma, before.lower.sigma - (upper ? 0 : 1));
  }
}

TEST(Synth, DeleteRemovesLeaf) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SynthPage page = generate_template(8, seed);
    const PageAnalysis before = analyze(page);
    for (const EditSide side : {EditSide::Upper, EditSide::Lower}) {
      for (std::size_t d = 1; d < 8; ++d) {
        SynthPage edited;
        try {
          edited = mutate(page, {MutationKind::DeleteNode, side, d}, seed);
        } catch (const Error& e) {
          ASSERT_EQ(e.code(), ErrorCode::Inapplicable);
          continue;
        }
        const PageAnalysis after = analyze(edited);
        ASSERT_EQ(after.profile, edited.truth);
        if (after.profile.d_max == before.profile.d_max) {
          EXPECT_EQ(after.profile.P[d] + 1, before.profile.P[d]);
        }
        const std::int64_t du = after.upper.sigma - before.upper.sigma;
        const std::int64_t dl = after.lower.sigma - before.lower.sigma;
        EXPECT_EQ(side == EditSide::Upper ? du : dl, 1);
        EXPECT_EQ(side == EditSide::Upper ? dl : du, 0);
      }
    }
  }
}

TEST(Synth, DualEditKeepsDelta) {
  std::size_t applied = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const SynthPage page = generate_template(6, seed);
    const PageAnalysis before = analyze(page);
    SynthPage edited;
    try {
      edited = mutate(page, {MutationKind::SymmetricDualEdit, EditSide::Both, 3}, seed);
    } catch (const Error& e) {
      ASSERT_EQ(e.code(), ErrorCode::Inapplicable);
      continue;
    }
    ++applied;
    const PageAnalysis after = analyze(edited);
    EXPECT_EQ(after.profile.P[3], before.profile.P[3] + 2);
    EXPECT_EQ(after.upper.sigma, before.upper.sigma - 1);
    EXPECT_EQ(after.lower.sigma, before.lower.sigma - 1);
  }
  EXPECT_GT(applied, 10u);
}

TEST(Synth, PermutationKeepsCountsButMovesSigma) {
  std::size_t applied = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const SynthPage page = generate_template(7, seed);
    const PageAnalysis before = analyze(page);
    for (const EditSide side : {EditSide::Upper, EditSide::Lower}) {
      SynthPage edited;
      try {
        edited = mutate(page, {MutationKind::PermuteSiblings, side, 2}, seed);
      } catch (const Error& e) {
        ASSERT_EQ(e.code(), ErrorCode::Inapplicable);
        continue;
      }
      ++applied;
      const PageAnalysis after = analyze(edited);
      EXPECT_EQ(after.profile.P, before.profile.P);
      EXPECT_EQ(after.profile, edited.truth);
      // The moved subtree's pairs leave one side and join the other.
      const std::int64_t du = after.upper.sigma - before.upper.sigma;
      const std::int64_t dl = after.lower.sigma - before.lower.sigma;
      EXPECT_EQ(du, -dl);
      EXPECT_EQ(du > 0, side == EditSide::Upper);
      EXPECT_NE(du, 0);
    }
  }
  EXPECT_GT(applied, 10u);
}

TEST(Synth, PermutationNeedsTwoNodes) {
  const SynthPage chain = generate_with_counts({1, 1, 1, 1}, 2);
  EXPECT_EQ(code_of([&] { mutate(chain, {MutationKind::PermuteSiblings, EditSide::Upper, 2}, 1); }),
            ErrorCode::Inapplicable);
}

TEST(Synth, RandomMutationsStayConsistent) {
  std::mt19937_64 rng(99);
  std::map<MutationKind, int> seen;
  for (int i = 0; i < 200; ++i) {
    const SynthPage page = generate_template(1 + i % 25, rng());
    const auto m = random_mutation(page, rng);
    if (!m) continue;
    ++seen[m->kind];
    const SynthPage edited = mutate(page, *m, rng());
    ASSERT_NE(edited.html, page.html);
    ASSERT_EQ(analyze(edited).profile, edited.truth);
  }
  EXPECT_EQ(seen.size(), 4u);
}

TEST(Synth, CollisionPairsShareTotalArea) {
  const BarParams params{Rational(1), Rational(0)};
  for (std::size_t d_max = 3; d_max <= 25; ++d_max) {
    const auto [before, after] = make_collision_pair(d_max, d_max * 7);
    ASSERT_EQ(before.truth.d_max, d_max);
    ASSERT_EQ(after.truth.d_max, d_max);
    EXPECT_EQ(before.truth.P[d_max - 2], 3u);
    EXPECT_EQ(before.truth.P[d_max - 1], 2u);
    EXPECT_EQ(after.truth.P[d_max - 2], 4u);
    EXPECT_EQ(after.truth.P[d_max - 1], 1u);
    EXPECT_EQ(total_area(before.truth, params), total_area(after.truth, params));
    EXPECT_EQ(analyze(after).profile, after.truth);
  }
}

}  // namespace
}  // namespace bartree
