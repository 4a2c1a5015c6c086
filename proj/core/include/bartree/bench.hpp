#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bartree/change_detector.hpp"
#include "bartree/serialization.hpp"

namespace bartree {

struct BenchConfig {
  std::vector<std::size_t> classes{5, 10, 15, 20, 25};
  std::size_t pages_per_class = 40;
  double mutation_rate = 0.75;
  std::vector<CompareMode> modes{CompareMode::Simple, CompareMode::Full,
                                 CompareMode::FullWithDelta};
  // Extra per-class pages built as same-A_total collision pairs (classes
  // with d_max < 3 get none).
  std::size_t collision_pages_per_class = 8;
  std::size_t repetitions = 5;
  std::uint64_t seed = 1;
};

struct KindTally {
  std::size_t n = 0;
  std::size_t detected = 0;

  friend bool operator==(const KindTally&, const KindTally&) = default;
};

struct ClassResult {
  std::size_t d_max = 0;
  CompareMode mode = CompareMode::Simple;
  std::string corpus;  // "random" or "collision"
  std::size_t pages = 0;
  std::size_t n = 0;  // mutated pages
  std::size_t detected = 0;
  std::size_t false_positives = 0;  // changes reported on unmutated pages
  // Unset when no page was mutated.
  std::optional<double> detection_rate;
  bool degenerate = false;
  std::map<std::string, KindTally> by_kind;
  // Per page: median over repetitions; then mean / median over pages.
  double mean_check_ms = 0;
  double median_check_ms = 0;
};

struct BenchReport {
  std::uint64_t seed = 0;
  std::vector<ClassResult> classes;
};

BenchReport run_bench(const BenchConfig& config);

// Same report with every timing field zeroed, for determinism checks.
BenchReport without_timing(BenchReport report);

Json to_json(const BenchReport& report);
std::string format_table(const BenchReport& report);

}  // namespace bartree
