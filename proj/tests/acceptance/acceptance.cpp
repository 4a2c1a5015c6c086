// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Tolerances and budgets are the constants below; nothing is read from the
// environment.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bartree/bar_tree.hpp"
#include "bartree/bench.hpp"
#include "bartree/change_detector.hpp"
#include "bartree/error.hpp"
#include "bartree/fetch.hpp"
#include "bartree/harvester.hpp"
#include "bartree/serialization.hpp"
#include "bartree/store.hpp"
#include "bartree/synth.hpp"
#include "support.hpp"

namespace {

using namespace bartree;
using Clock = std::chrono::steady_clock;

constexpr int kIdentityCases = 1000;
constexpr double kIdentityBudgetS = 5.0;
constexpr double kBenchBudgetS = 60.0;
constexpr std::size_t kMinMutated = 100;
constexpr double kFullOverSimpleMax = 2.0;
constexpr std::size_t kRegistrySize = 200;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, bool ok, const std::string& what) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << what << std::endl;
  if (!ok) ++failures;
}

// w_0 = I, w_d = (I - (d-1) r) / P_{d-1} * w_{d-1}, written out longhand.
std::vector<Rational> oracle_widths(const std::vector<std::size_t>& P, const Rational& I,
                                    const Rational& r) {
  std::vector<Rational> w{I};
  for (std::size_t d = 1; d <= P.size(); ++d) {
    Rational shrink = I;
    for (std::size_t k = 1; k < d; ++k) shrink -= r;
    w.push_back(shrink / Rational(P[d - 1]) * w.back());
  }
  return w;
}

DepthProfile profile_of(std::vector<std::size_t> P) {
  DepthProfile p;
  p.d_max = P.size();
  p.P = std::move(P);
  return p;
}

// ---------------------------------------------------------------------------

void criterion_1() {
  std::mt19937_64 rng(1);
  const auto t0 = Clock::now();
  int ok = 0;
  std::string first_bad;
  for (int i = 0; i < kIdentityCases; ++i) {
    const std::size_t d_max = 1 + rng() % 25;
    std::vector<std::size_t> P;
    for (std::size_t d = 0; d < d_max; ++d) P.push_back(1 + rng() % 6);
    const Rational I(static_cast<long>(1 + rng() % 9), static_cast<long>(1 + rng() % 4));
    // r anywhere in [0, I / d_max], endpoints included.
    const long steps = 1 + static_cast<long>(rng() % 8);
    const Rational r = I / Rational(static_cast<long>(d_max)) *
                       Rational(static_cast<long>(rng() % (steps + 1)), steps);
    const BarParams params{I, r};
    const DepthProfile profile = profile_of(P);

    const auto w = widths(profile, params);
    const auto A = areas(profile, params);
    const auto rec = nett_areas(profile, params, NettForm::Recursive);
    const auto prod = nett_areas(profile, params, NettForm::Product);
    const auto expect_w = oracle_widths(P, I, r);
    bool good = w == expect_w && A.size() == w.size() && rec == prod;
    Rational sum = 0;
    for (std::size_t d = 1; good && d <= d_max; ++d) {
      good = rec[d] == w[d] && A[d] == Rational(static_cast<long>(d)) * w[d];
      sum += w[d];
    }
    good = good && total_area(profile, params) == sum;
    if (good) {
      ++ok;
    } else if (first_bad.empty()) {
      first_bad = " (first failure: case " + std::to_string(i) + ")";
    }
  }
  const double s = seconds_since(t0);
  std::ostringstream msg;
  msg << "exact bar-tree identities hold on " << ok << "/" << kIdentityCases
      << " random profiles (d_max <= 25) in " << s << " s, budget " << kIdentityBudgetS << " s"
      << first_bad;
  report(1, ok == kIdentityCases && s < kIdentityBudgetS, msg.str());
}

void criterion_2() {
  std::string msg;
  bool ok = false;
  try {
    const TargetConfig c = load_target_config(testing::fixture_path("target.json"));
    const PageAnalysis a =
        analyze_page(testing::fixture("publication.html"), c.roi_spec(), c.tag_config());
    const auto& P = a.profile.P;
    ok = P.size() > 9 && P[5] == 4 && P[9] == 3 && P == testing::kPublicationP;
    std::ostringstream s;
    s << "publication fixture profile P =";
    for (auto p : P) s << ' ' << p;
    s << "; P_5 = " << (P.size() > 5 ? P[5] : 0) << ", P_9 = " << (P.size() > 9 ? P[9] : 0)
      << " (want 4 and 3)";
    msg = s.str();
  } catch (const std::exception& e) {
    msg = std::string("pipeline error: ") + e.what();
  }
  report(2, ok, msg);
}

void criterion_3() {
  bool ok = true;
  std::string bad;
  const Rational I(1);
  for (std::size_t d_max = 1; d_max <= 25; ++d_max) {
    const DepthProfile chain = profile_of(std::vector<std::size_t>(d_max, 1));
    const Rational total = total_area(chain, {I, Rational(0)});
    if (total != Rational(static_cast<long>(d_max)) * I) {
      ok = false;
      if (bad.empty()) bad = "; first mismatch at d_max=" + std::to_string(d_max) + ": " +
                             to_fraction_string(total);
    }
  }
  // With I != 1 the same chain compounds: w_d = I^(d+1).
  bool general = true;
  for (std::size_t d_max = 1; d_max <= 25; ++d_max) {
    const Rational J(3, 2);
    Rational expect = 0;
    Rational power = J;
    for (std::size_t d = 1; d <= d_max; ++d) {
      power *= J;
      expect += power;
    }
    general = general &&
              total_area(profile_of(std::vector<std::size_t>(d_max, 1)), {J, Rational(0)}) ==
                  expect;
  }
  report(3, ok && general,
         "all-ones profile with r = 0, I = 1 gives A_total = d_max * I exactly for d_max 1..25"
         " (I = 3/2 matches sum of I^(d+1): " + std::string(general ? "yes" : "no") + ")" + bad);
}

BenchReport full_bench() {
  BenchConfig c;
  c.classes = {5, 10, 15, 20, 25};
  c.pages_per_class = 40;
  c.mutation_rate = 0.75;
  c.collision_pages_per_class = 8;
  c.repetitions = 5;
  c.seed = 1;
  return run_bench(c);
}

void criterion_4(const BenchReport& r, double seconds) {
  std::size_t pages = 0;
  std::size_t mutated = 0;
  std::size_t fd_n = 0, fd_hit = 0;
  std::size_t full_n = 0, full_hit = 0;
  std::size_t perm_n = 0, perm_full_hit = 0;
  std::size_t coll_full_n = 0, coll_full_hit = 0;
  std::size_t coll_simple_n = 0, coll_simple_hit = 0;
  std::size_t false_positives = 0;
  for (const auto& c : r.classes) {
    false_positives += c.false_positives;
    if (c.corpus == "random" && c.mode == CompareMode::FullWithDelta) {
      pages += c.pages;
      mutated += c.n;
    }
    if (c.mode == CompareMode::FullWithDelta) {
      fd_n += c.n;
      fd_hit += c.detected;
    }
    if (c.mode == CompareMode::Full && c.corpus == "random") {
      for (const auto& [kind, t] : c.by_kind) {
        if (kind == to_string(MutationKind::PermuteSiblings)) {
          perm_n += t.n;
          perm_full_hit += t.detected;
        } else {
          full_n += t.n;
          full_hit += t.detected;
        }
      }
    }
    if (c.mode == CompareMode::Full && c.corpus == "collision") {
      coll_full_n += c.n;
      coll_full_hit += c.detected;
    }
    if (c.mode == CompareMode::Simple && c.corpus == "collision") {
      coll_simple_n += c.n;
      coll_simple_hit += c.detected;
    }
  }
  const bool ok = pages == 200 && mutated >= kMinMutated && fd_n > 0 && fd_hit == fd_n &&
                  full_n > 0 && full_hit == full_n && coll_full_n > 0 &&
                  coll_full_hit == coll_full_n && coll_simple_n > 0 &&
                  coll_simple_hit < coll_simple_n && false_positives == 0 &&
                  seconds < kBenchBudgetS;
  std::ostringstream msg;
  msg << pages << " pages, " << mutated << " mutated; full-delta " << fd_hit << "/" << fd_n
      << "; full " << full_hit << "/" << full_n << " on insert/delete/dual edits and "
      << coll_full_hit << "/" << coll_full_n << " on collisions (sibling permutations "
      << perm_full_hit << "/" << perm_n << ", invisible to depth counts); simple "
      << coll_simple_hit << "/" << coll_simple_n << " on collisions; " << false_positives
      << " false positives; " << seconds << " s, budget " << kBenchBudgetS << " s";
  report(4, ok, msg.str());
}

void criterion_5() {
  const DepthProfile p = profile_of({1, 2, 3});
  const BarParams params = BarParams::defaults_for(3);
  auto fp = [&](std::int64_t su, std::int64_t sl) {
    return fingerprint(p, su, sl, params, "roi", "2000-01-01T00:00:00Z");
  };
  const Fingerprint base = fp(2, 5);
  struct Row {
    Fingerprint next;
    DeltaCase want;
  };
  const std::vector<Row> rows = {
      {fp(2, 5), DeltaCase::NoChange},
      {fp(4, 7), DeltaCase::SymmetricSimultaneous},
      {fp(1, 5), DeltaCase::UpperOnly},
      {fp(2, 3), DeltaCase::LowerOnly},
      {fp(0, 4), DeltaCase::BothDifferent},
  };
  bool ok = true;
  for (const Row& row : rows) {
    ok = ok && compare(base, row.next, CompareMode::FullWithDelta).delta_case == row.want;
  }

  // All eight predicate combinations: five classify, three are rejected.
  int rejected = 0;
  for (int bits = 0; bits < 8; ++bits) {
    try {
      classify_delta_predicates(bits & 1, bits & 2, bits & 4);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::CorruptFingerprint) ++rejected;
    }
  }
  ok = ok && rejected == 3;

  // Exhaustive over small sigmas: consistent fingerprints never land on a
  // rejected combination.
  bool reachable_only = true;
  for (int a = -3; a <= 3; ++a) {
    for (int b = -3; b <= 3; ++b) {
      for (int c = -3; c <= 3; ++c) {
        for (int d = -3; d <= 3; ++d) {
          try {
            classify_delta(fp(a, b), fp(c, d));
          } catch (const Error&) {
            reachable_only = false;
          }
        }
      }
    }
  }
  // A fingerprint that breaks delta = sigma_upper - sigma_lower is refused.
  Fingerprint broken = base;
  broken.delta += 1;
  bool refused = false;
  try {
    compare(base, broken, CompareMode::FullWithDelta);
  } catch (const Error& e) {
    refused = e.code() == ErrorCode::CorruptFingerprint;
  }
  ok = ok && reachable_only && refused;
  report(5, ok,
         "five delta cases classify as constructed; " + std::to_string(rejected) +
             "/3 impossible predicate combinations rejected; none reachable from 2401 "
             "consistent pairs; inconsistent fingerprint refused: " +
             (refused ? "yes" : "no"));
}

void criterion_6(const BenchReport& r) {
  std::map<CompareMode, std::vector<std::pair<std::size_t, double>>> medians;
  for (const auto& c : r.classes) {
    if (c.corpus == "random") medians[c.mode].emplace_back(c.d_max, c.median_check_ms);
  }
  bool monotone = true;
  bool cheap = true;
  std::ostringstream msg;
  msg << "median check ms by d_max (random corpus):";
  for (const auto& [mode, rows] : medians) {
    msg << " " << to_string(mode) << " [";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", rows[i].second);
      msg << (i ? " " : "") << buf;
      if (i > 0 && rows[i].second < rows[i - 1].second) monotone = false;
    }
    msg << "]";
  }
  const auto& simple = medians[CompareMode::Simple];
  const auto& full = medians[CompareMode::Full];
  double worst = 0;
  for (std::size_t i = 0; i < simple.size() && i < full.size(); ++i) {
    const double ratio = full[i].second / simple[i].second;
    worst = std::max(worst, ratio);
    if (ratio > kFullOverSimpleMax) cheap = false;
  }
  msg << "; worst full/simple ratio " << worst << " (max " << kFullOverSimpleMax << ")";
  report(6, monotone && cheap && simple.size() == 5 && full.size() == 5, msg.str());
}

void criterion_7() {
  std::vector<std::string> notes;
  bool ok = true;
  auto expect = [&](bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back(what);
    }
  };
  try {
    testing::TempDir dir;
    const auto store = dir / "store.json";
    MemoryPageSource source;
    const TargetConfig config = load_target_config(testing::fixture_path("target.json"));
    const std::string page = testing::fixture("publication.html");
    source.set(config.url, page);
    Harvester h = Harvester::open(source, store);
    const TargetRecord first = h.register_target(config);

    const CheckResult same = h.check_target(config.target_id);
    expect(!same.report.changed && same.report.delta_case == DeltaCase::NoChange &&
               same.action == Action::Proceed,
           "unchanged page flagged");

    std::string gone = page;
    const std::string abstract = "We describe a";
    gone.replace(gone.find(abstract), abstract.size(), "We sketch a");
    source.set(config.url, gone);
    const std::string bytes = testing::read_file(store);
    const CheckResult deferred = h.check_target(config.target_id);
    expect(deferred.action == Action::DeferAndWarn && !deferred.roi_present,
           "RoI deletion not deferred");
    expect(testing::read_file(store) == bytes, "store touched on deferral");

    std::string edited = page;
    edited.insert(edited.find("<body>") + 6, "<div class=\"banner\"><p>Notice</p></div>");
    source.set(config.url, edited);
    const CheckResult changed = h.check_target(config.target_id);
    const TargetRecord now = store_load(store).targets.at(config.target_id);
    expect(changed.action == Action::ReExtractPattern, "structural edit not re-extracted");
    expect(!(now.fingerprint == first.fingerprint), "fingerprint not replaced");
    expect(now.history.size() == 1 && now.history[0] == first.fingerprint,
           "old fingerprint missing from history");
    expect(h.check_target(config.target_id).action == Action::Proceed,
           "replacement fingerprint not stable");
  } catch (const std::exception& e) {
    ok = false;
    notes.push_back(std::string("error: ") + e.what());
  }
  std::string msg = "register -> check NoChange; RoI deletion -> DeferAndWarn, store untouched; "
                    "layout edit -> ReExtractPattern, fingerprint replaced, old one in history";
  for (const auto& n : notes) msg += "; " + n;
  report(7, ok, msg);
}

void criterion_8() {
  std::mt19937_64 rng(8);
  Registry reg;
  for (std::size_t i = 0; i < kRegistrySize; ++i) {
    const std::size_t d_max = 1 + rng() % 25;
    const SynthPage page = generate_template(d_max, rng());
    TargetConfig c;
    c.target_id = "t" + std::to_string(i);
    c.url = "http://store.example/" + std::to_string(i);
    c.roi_text = page.roi_text;
    // Awkward rationals: large coprime terms, r somewhere inside the bound.
    c.I = Rational(static_cast<long>(1 + rng() % 1000003), static_cast<long>(1 + rng() % 999983));
    c.r = *c.I / Rational(static_cast<long>(d_max)) *
          Rational(static_cast<long>(rng() % 97), 97);
    TargetRecord rec = build_record(c, page.html, "2000-01-01T00:00:00Z");
    if (i % 3 == 0) rec.history.push_back(rec.fingerprint);
    reg.targets.emplace(c.target_id, std::move(rec));
  }
  testing::TempDir dir;
  store_save(reg, dir / "a.json");
  const Registry back = store_load(dir / "a.json");
  std::size_t rationals = 0;
  std::size_t exact = 0;
  for (const auto& [id, rec] : reg.targets) {
    const TargetRecord& other = back.targets.at(id);
    auto same = [&](const Rational& x, const Rational& y) {
      ++rationals;
      if (x == y) ++exact;
    };
    same(rec.fingerprint.A_total, other.fingerprint.A_total);
    same(rec.fingerprint.params.I, other.fingerprint.params.I);
    same(rec.fingerprint.params.r, other.fingerprint.params.r);
    for (std::size_t d = 0; d < rec.fingerprint.A.size() && d < other.fingerprint.A.size(); ++d) {
      same(rec.fingerprint.A[d], other.fingerprint.A[d]);
    }
  }
  store_save(back, dir / "b.json");
  const bool bytes = testing::read_file(dir / "a.json") == testing::read_file(dir / "b.json");
  report(8, back == reg && rationals == exact && bytes,
         std::to_string(kRegistrySize) + "-target registry: " + std::to_string(exact) + "/" +
             std::to_string(rationals) + " rational fields exact after load; re-save " +
             (bytes ? "byte-identical" : "differs"));
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  const auto t0 = Clock::now();
  BenchReport bench;
  bool bench_ok = true;
  try {
    bench = full_bench();
  } catch (const std::exception& e) {
    std::cout << "bench error: " << e.what() << std::endl;
    bench_ok = false;
  }
  const double bench_s = seconds_since(t0);
  if (bench_ok) {
    criterion_4(bench, bench_s);
  } else {
    report(4, false, "benchmark did not run");
  }
  criterion_5();
  if (bench_ok) {
    criterion_6(bench);
  } else {
    report(6, false, "benchmark did not run");
  }
  criterion_7();
  criterion_8();
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
