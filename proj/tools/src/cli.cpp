#include "bartree_cli/cli.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "bartree/bench.hpp"
#include "bartree/error.hpp"
#include "bartree/harvester.hpp"
#include "bartree/serialization.hpp"

namespace bartree::cli {
namespace {

// Usage-level failure detected after parsing (bad file, bad value).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError(std::string("cannot read ") + what + " '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Rational rational_arg(const std::string& text, const char* flag) {
  try {
    return parse_rational(text);
  } catch (const Error&) {
    throw UsageError(std::string(flag) + " expects an integer or num/den, got '" + text + "'");
  }
}

CompareMode mode_arg(const std::string& text) {
  const auto mode = parse_compare_mode(text);
  if (!mode) throw UsageError("unknown mode '" + text + "' (simple|full|full-delta)");
  return *mode;
}

// Routes library logging into `err` for the duration of one dispatch.
class LogScope {
 public:
  LogScope(std::ostream& err, bool verbose) : previous_(spdlog::default_logger()) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    sink->set_pattern("[%l] %v");
    auto logger = std::make_shared<spdlog::logger>("bartree", sink);
    logger->set_level(verbose ? spdlog::level::info : spdlog::level::warn);
    spdlog::set_default_logger(logger);
  }
  ~LogScope() { spdlog::set_default_logger(previous_); }
  LogScope(const LogScope&) = delete;
  LogScope& operator=(const LogScope&) = delete;

 private:
  std::shared_ptr<spdlog::logger> previous_;
};

Json check_json(const CheckResult& result) {
  Json j = to_json(result.report);
  j["action"] = std::string(to_string(result.action));
  j["roi_present"] = result.roi_present;
  if (result.replacement) j["fingerprint"] = to_json(result.replacement->fingerprint);
  if (!result.message.empty()) j["message"] = result.message;
  return j;
}

Json labeled_json(const LabeledRecord& rec) {
  Json fields = Json::object();
  for (const auto& [label, text] : rec.fields) fields[label] = text;
  return {{"source_url", rec.source_url},
          {"extracted_at", rec.extracted_at},
          {"fields", fields},
          {"warnings", rec.warnings}};
}

struct Options {
  bool json = false;
  bool verbose = false;

  std::string config_path;
  std::string store_path;
  std::string html_path;
  std::string target_id;
  std::string mode;
  std::string source_url;

  std::string roi_path;
  std::vector<std::string> attrs;
  std::string I;
  std::string r;
  std::string captured_at;
  std::optional<std::size_t> occurrence;
  bool show_profile = false;

  std::vector<std::size_t> classes{5, 10, 15, 20, 25};
  std::size_t pages = 40;
  double mutation_rate = 0.75;
  std::vector<std::string> modes{"simple", "full", "full-delta"};
  std::size_t collisions = 8;
  std::size_t reps = 5;
  std::uint64_t seed = 1;
  std::string out_path;
};

int run_init(const Options& o, std::ostream& out) {
  TargetConfig config;
  try {
    config = load_target_config(o.config_path);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  HttpFetcher fetcher;
  Harvester harvester = Harvester::open(fetcher, o.store_path);
  const TargetRecord record =
      o.html_path.empty() ? harvester.register_target(config)
                          : harvester.register_target(config, read_text(o.html_path, "html file"));
  if (o.json) {
    out << Json{{"target_id", config.target_id},
                {"fingerprint", to_json(record.fingerprint)}}
                   .dump(2)
        << "\n";
  } else {
    out << "registered " << config.target_id << ": d_max=" << record.fingerprint.d_max
        << " A_total=" << to_fraction_string(record.fingerprint.A_total)
        << " delta=" << record.fingerprint.delta << "\n";
  }
  return kOk;
}

int run_check(const Options& o, std::ostream& out) {
  HttpFetcher fetcher;
  Harvester harvester = Harvester::open(fetcher, o.store_path);
  const TargetRecord seen = harvester.record(o.target_id);
  const CompareMode mode = o.mode.empty() ? seen.config.mode : mode_arg(o.mode);
  CheckResult result;
  if (!o.html_path.empty()) {
    result = harvester.check_target(o.target_id, read_text(o.html_path, "html file"), mode);
  } else if (mode == seen.config.mode) {
    result = harvester.check_target(o.target_id);
  } else {
    const FetchResult page = fetcher.fetch(seen.config.url);
    result = harvester.check_target(o.target_id, page.body, mode);
  }
  out << check_json(result).dump(2) << "\n";
  return result.action == Action::DeferAndWarn ? kOperational : kOk;
}

int run_extract(const Options& o, std::ostream& out) {
  HttpFetcher fetcher;
  Harvester harvester = Harvester::open(fetcher, o.store_path);
  const LabeledRecord rec =
      o.html_path.empty()
          ? harvester.extract_record(o.target_id)
          : harvester.extract_record(o.target_id, read_text(o.html_path, "html file"),
                                     o.source_url);
  if (o.json) {
    out << labeled_json(rec).dump(2) << "\n";
  } else {
    for (const auto& [label, text] : rec.fields) out << label << ": " << text << "\n";
    for (const auto& label : rec.warnings) out << "(no match for " << label << ")\n";
  }
  return kOk;
}

int run_fingerprint(const Options& o, std::ostream& out, std::ostream& err) {
  const std::string html = read_text(o.html_path, "html file");
  const std::string roi = read_text(o.roi_path, "roi file");
  std::vector<RoiAttribute> attributes;
  for (const auto& a : o.attrs) {
    const auto eq = a.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError("--attr expects label=text, got '" + a + "'");
    }
    attributes.push_back({a.substr(0, eq), a.substr(eq + 1)});
  }
  RoiSpec spec;
  try {
    spec = RoiSpec::make(roi, std::move(attributes), o.occurrence);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const PageAnalysis a = analyze_page(html, spec);
  BarParams params = BarParams::defaults_for(a.profile.d_max);
  if (!o.I.empty()) params.I = rational_arg(o.I, "--I");
  if (!o.r.empty()) params.r = rational_arg(o.r, "--r");
  params.validate(a.profile.d_max);
  const Fingerprint fp =
      fingerprint(a.profile, a.upper.sigma, a.lower.sigma, params, spec.roi_text,
                  o.captured_at.empty() ? utc_timestamp() : o.captured_at);
  if (o.show_profile) err << describe(a.profile);
  out << to_json(fp).dump(2) << "\n";
  return kOk;
}

int run_bench_cmd(const Options& o, std::ostream& out) {
  BenchConfig config;
  config.classes = o.classes;
  config.pages_per_class = o.pages;
  config.mutation_rate = o.mutation_rate;
  config.modes.clear();
  for (const auto& m : o.modes) config.modes.push_back(mode_arg(m));
  config.collision_pages_per_class = o.collisions;
  config.repetitions = o.reps;
  config.seed = o.seed;
  for (const std::size_t d : config.classes) {
    if (d < 1 || d > 25) throw UsageError("depth classes must be in [1, 25]");
  }
  if (config.mutation_rate < 0 || config.mutation_rate > 1) {
    throw UsageError("--mutation-rate must be in [0, 1]");
  }
  const BenchReport report = run_bench(config);
  const std::string json = to_json(report).dump(2) + "\n";
  if (!o.out_path.empty()) {
    std::ofstream file(o.out_path, std::ios::binary | std::ios::trunc);
    if (!file) throw UsageError("cannot write '" + o.out_path + "'");
    file << json;
  }
  if (o.json) {
    out << json;
  } else {
    out << format_table(report);
  }
  return kOk;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out,
                 std::ostream& err) {
  CLI::App app{"Template fingerprinting and change detection for focused harvesting",
               "bartree"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_flag("--json", o.json, "Print results as JSON");
  app.add_flag("-v,--verbose", o.verbose, "Log progress to standard error");

  auto* init = app.add_subcommand("init", "Register a target and store its fingerprint");
  init->add_option("--config", o.config_path, "Target config JSON")->required();
  init->add_option("--store", o.store_path, "Store file (created if missing)")->required();
  init->add_option("--html", o.html_path, "Use this local page instead of fetching the URL");

  auto* check = app.add_subcommand("check", "Re-fingerprint a target and compare");
  check->add_option("--target-id", o.target_id, "Registered target id")->required();
  check->add_option("--store", o.store_path, "Store file")->required();
  check->add_option("--mode", o.mode, "simple | full | full-delta (default: target's)");
  check->add_option("--html", o.html_path, "Use this local page instead of fetching the URL");

  auto* extract = app.add_subcommand("extract", "Extract labeled attributes from a target");
  extract->add_option("--target-id", o.target_id, "Registered target id")->required();
  extract->add_option("--store", o.store_path, "Store file")->required();
  extract->add_option("--html", o.html_path, "Use this local page instead of fetching the URL");
  extract->add_option("--url", o.source_url, "Source URL to record with --html");

  auto* fp = app.add_subcommand("fingerprint", "Fingerprint a local page (offline)");
  fp->add_option("--html", o.html_path, "HTML file")->required();
  fp->add_option("--roi-file", o.roi_path, "File holding the RoI display text")->required();
  fp->add_option("--attr", o.attrs, "Attribute as label=text (repeatable)");
  fp->add_option("--occurrence", o.occurrence, "Zero-based occurrence of a repeated RoI");
  fp->add_option("--I", o.I, "Initial bar width (integer or num/den)");
  fp->add_option("--r", o.r, "Shrink ratio (integer or num/den)");
  fp->add_option("--captured-at", o.captured_at, "Timestamp to record (default: now)");
  fp->add_flag("--profile", o.show_profile, "Print the depth profile to standard error");

  auto* bench = app.add_subcommand("bench", "Synthetic detection accuracy and timing run");
  bench->add_option("--classes", o.classes, "d_max classes")->delimiter(',');
  bench->add_option("--pages", o.pages, "Pages per class");
  bench->add_option("--mutation-rate", o.mutation_rate, "Fraction of pages mutated");
  bench->add_option("--modes", o.modes, "Compare modes")->delimiter(',');
  bench->add_option("--collisions", o.collisions, "Collision pages per class");
  bench->add_option("--reps", o.reps, "Timing repetitions per page");
  bench->add_option("--seed", o.seed, "RNG seed");
  bench->add_option("--out", o.out_path, "Also write the JSON report here");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("bartree");

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kUsage;
  }

  LogScope logging(err, o.verbose);
  CLI::App* used = app.get_subcommands().front();
  try {
    if (used == init) return run_init(o, out);
    if (used == check) return run_check(o, out);
    if (used == extract) return run_extract(o, out);
    if (used == fp) return run_fingerprint(o, out, err);
    return run_bench_cmd(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << used->help();
    return kUsage;
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return kOperational;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kOperational;
  }
}

}  // namespace bartree::cli
