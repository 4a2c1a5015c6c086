#include "bartree/bench.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "bartree/error.hpp"
#include "bartree/harvester.hpp"
#include "bartree/synth.hpp"

namespace bartree {
namespace {

constexpr const char* kStamp = "2000-01-01T00:00:00Z";

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t page_seed(std::uint64_t seed, std::size_t d_max, std::size_t page,
                        std::uint64_t salt) {
  return mix(mix(mix(seed ^ salt) + d_max) + page);
}

double median(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2;
}

TargetConfig bench_config(std::size_t d_max, std::size_t page, const std::string& roi,
                          bool exact_r0) {
  TargetConfig config;
  config.target_id = "bench-" + std::to_string(d_max) + "-" + std::to_string(page);
  config.url = "http://bench.invalid/" + std::to_string(d_max) + "/" + std::to_string(page);
  config.roi_text = roi;
  if (exact_r0) {
    config.I = Rational(1);
    config.r = Rational(0);
  }
  return config;
}

struct Sample {
  bool mutated = false;
  std::string kind;
  std::string original;
  std::string html;
  std::string roi;
};

// Accumulates one (d_max, corpus) class across all modes.
class ClassRun {
 public:
  ClassRun(std::size_t d_max, std::string corpus, const BenchConfig& config)
      : config_(config) {
    for (CompareMode mode : config.modes) {
      ClassResult r;
      r.d_max = d_max;
      r.mode = mode;
      r.corpus = corpus;
      results_.push_back(std::move(r));
    }
    times_.resize(results_.size());
  }

  void add(const TargetRecord& record, const Sample& s) {
    std::vector<std::vector<double>> reps(results_.size());
    std::vector<bool> flagged(results_.size(), false);
    // Modes interleave inside each repetition so drift hits them equally.
    for (std::size_t rep = 0; rep < std::max<std::size_t>(config_.repetitions, 1); ++rep) {
      for (std::size_t m = 0; m < results_.size(); ++m) {
        const auto t0 = std::chrono::steady_clock::now();
        const CheckResult check = recheck(record, s.html, results_[m].mode, kStamp);
        const auto t1 = std::chrono::steady_clock::now();
        reps[m].push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
        flagged[m] = check.report.changed || check.action == Action::DeferAndWarn;
      }
    }
    for (std::size_t m = 0; m < results_.size(); ++m) {
      ClassResult& r = results_[m];
      ++r.pages;
      times_[m].push_back(median(reps[m]));
      if (s.mutated) {
        ++r.n;
        auto& tally = r.by_kind[s.kind];
        ++tally.n;
        if (flagged[m]) {
          ++r.detected;
          ++tally.detected;
        }
      } else if (flagged[m]) {
        ++r.false_positives;
      }
    }
  }

  void finish(std::vector<ClassResult>& out) {
    for (std::size_t m = 0; m < results_.size(); ++m) {
      ClassResult& r = results_[m];
      if (r.n == 0) {
        r.degenerate = true;
      } else {
        r.detection_rate = static_cast<double>(r.detected) / static_cast<double>(r.n);
      }
      const auto& t = times_[m];
      r.mean_check_ms = t.empty() ? 0 : std::accumulate(t.begin(), t.end(), 0.0) /
                                            static_cast<double>(t.size());
      r.median_check_ms = median(t);
      out.push_back(std::move(r));
    }
  }

 private:
  const BenchConfig& config_;
  std::vector<ClassResult> results_;
  std::vector<std::vector<double>> times_;
};

}  // namespace

BenchReport run_bench(const BenchConfig& config) {
  if (config.mutation_rate < 0 || config.mutation_rate > 1) {
    throw Error(ErrorCode::InvalidInput, "mutation rate must be in [0, 1]");
  }
  if (config.modes.empty()) throw Error(ErrorCode::InvalidInput, "no compare mode selected");
  BenchReport report;
  report.seed = config.seed;

  for (const std::size_t d_max : config.classes) {
    ClassRun random(d_max, "random", config);
    for (std::size_t i = 0; i < config.pages_per_class; ++i) {
      std::mt19937_64 rng(page_seed(config.seed, d_max, i, 0));
      const SynthPage page = generate_template(d_max, rng());
      Sample s;
      s.html = page.html;
      const bool want = std::uniform_real_distribution<double>(0, 1)(rng) < config.mutation_rate;
      if (want) {
        if (const auto m = random_mutation(page, rng)) {
          s.mutated = true;
          s.kind = std::string(to_string(m->kind));
          s.html = mutate(page, *m, rng()).html;
        }
      }
      const TargetRecord record =
          build_record(bench_config(d_max, i, page.roi_text, false), page.html, kStamp);
      random.add(record, s);
    }
    random.finish(report.classes);

    if (d_max < 3 || config.collision_pages_per_class == 0) continue;
    ClassRun collision(d_max, "collision", config);
    for (std::size_t i = 0; i < config.collision_pages_per_class; ++i) {
      const auto [before, after] =
          make_collision_pair(d_max, page_seed(config.seed, d_max, i, 0xc011));
      Sample s;
      s.mutated = true;
      s.kind = "Collision";
      s.html = after.html;
      const TargetRecord record =
          build_record(bench_config(d_max, i, before.roi_text, true), before.html, kStamp);
      collision.add(record, s);
    }
    collision.finish(report.classes);
  }
  return report;
}

BenchReport without_timing(BenchReport report) {
  for (auto& c : report.classes) {
    c.mean_check_ms = 0;
    c.median_check_ms = 0;
  }
  return report;
}

Json to_json(const BenchReport& report) {
  Json classes = Json::array();
  for (const auto& c : report.classes) {
    Json kinds = Json::object();
    for (const auto& [kind, t] : c.by_kind) kinds[kind] = {{"n", t.n}, {"detected", t.detected}};
    Json j = {
        {"d_max", c.d_max},
        {"mode", std::string(to_string(c.mode))},
        {"detection_rate", c.detection_rate ? Json(*c.detection_rate) : Json(nullptr)},
        {"mean_check_ms", c.mean_check_ms},
        {"n", c.n},
        {"corpus", c.corpus},
        {"pages", c.pages},
        {"detected", c.detected},
        {"false_positives", c.false_positives},
        {"degenerate", c.degenerate},
        {"median_check_ms", c.median_check_ms},
        {"by_kind", kinds},
    };
    classes.push_back(std::move(j));
  }
  return {{"classes", classes}, {"seed", report.seed}};
}

std::string format_table(const BenchReport& report) {
  std::ostringstream out;
  out << "seed " << report.seed << "\n";
  out << std::left << std::setw(10) << "corpus" << std::right << std::setw(6) << "d_max"
      << "  " << std::left << std::setw(11) << "mode" << std::right << std::setw(6) << "pages"
      << std::setw(6) << "n" << std::setw(10) << "detected" << std::setw(8) << "rate"
      << std::setw(6) << "fp" << std::setw(12) << "mean ms" << std::setw(12) << "median ms"
      << "\n";
  out << std::fixed;
  for (const auto& c : report.classes) {
    out << std::left << std::setw(10) << c.corpus << std::right << std::setw(6) << c.d_max
        << "  " << std::left << std::setw(11) << to_string(c.mode) << std::right
        << std::setw(6) << c.pages << std::setw(6) << c.n << std::setw(10) << c.detected;
    if (c.detection_rate) {
      out << std::setw(8) << std::setprecision(3) << *c.detection_rate;
    } else {
      out << std::setw(8) << "n/a";
    }
    out << std::setw(6) << c.false_positives << std::setw(12) << std::setprecision(4)
        << c.mean_check_ms << std::setw(12) << c.median_check_ms;
    if (c.degenerate) out << "  (no mutated pages)";
    out << "\n";
  }
  return out.str();
}

}  // namespace bartree
