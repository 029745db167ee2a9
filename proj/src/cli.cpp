#include "twoslit/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>

#include <CLI11.hpp>
#include <fmt/chrono.h>
#include <fmt/format.h>
#include <json.hpp>

#include "twoslit/error.hpp"
#include "twoslit/wavemodel.hpp"

namespace twoslit::cli {

using nlohmann::json;

namespace {

constexpr std::size_t kDefaultPositions = 41;

void reject_unknown_keys(const json& obj, const std::string& where, std::initializer_list<const char*> known) {
  const std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError(fmt::format("{}{}: unknown field", where, key));
    }
  }
}

const json& require_object(const json& parent, const char* key) {
  const json& v = parent.at(key);
  if (!v.is_object()) {
    throw ConfigError(fmt::format("{}: expected an object", key));
  }
  return v;
}

double read_number(const json& obj, const std::string& where, const char* key, double fallback) {
  if (!obj.contains(key)) {
    return fallback;
  }
  const json& v = obj.at(key);
  if (!v.is_number()) {
    throw ConfigError(fmt::format("{}{}: expected a number", where, key));
  }
  return v.get<double>();
}

std::uint64_t read_count(const json& obj, const std::string& where, const char* key, std::uint64_t fallback) {
  if (!obj.contains(key)) {
    return fallback;
  }
  const json& v = obj.at(key);
  if (!v.is_number_unsigned()) {
    throw ConfigError(fmt::format("{}{}: expected a non-negative integer", where, key));
  }
  return v.get<std::uint64_t>();
}

Apparatus parse_apparatus(const json& obj) {
  reject_unknown_keys(obj, "apparatus.", {"lambda", "d", "s", "L", "w", "theta", "L1", "L2", "a"});
  if (!obj.contains("lambda")) {
    throw ConfigError("apparatus.lambda: missing required field");
  }
  const Apparatus def = Apparatus::paper_defaults();
  Apparatus app;
  app.lambda = read_number(obj, "apparatus.", "lambda", def.lambda);
  app.d = read_number(obj, "apparatus.", "d", def.d);
  app.s = read_number(obj, "apparatus.", "s", def.s);
  app.L = read_number(obj, "apparatus.", "L", def.L);
  app.w = read_number(obj, "apparatus.", "w", def.w);
  app.theta = read_number(obj, "apparatus.", "theta", def.theta);
  app.L1 = read_number(obj, "apparatus.", "L1", def.L1);
  app.L2 = read_number(obj, "apparatus.", "L2", def.L2);
  app.a = read_number(obj, "apparatus.", "a", def.a);
  try {
    check(app);
  } catch (const Error& e) {
    throw ConfigError(fmt::format("apparatus: {}", e.what()));
  }
  return app;
}

json apparatus_json(const Apparatus& app) {
  return {{"lambda", app.lambda}, {"d", app.d},   {"s", app.s},   {"L", app.L}, {"w", app.w},
          {"theta", app.theta},   {"L1", app.L1}, {"L2", app.L2}, {"a", app.a}};
}

OutcomeHypothesis parse_hypothesis_json(const json& v) {
  try {
    if (v.is_string()) {
      return parse_hypothesis(v.get<std::string>());
    }
    if (v.is_object()) {
      reject_unknown_keys(v, "hypothesis.", {"kind", "D"});
      if (!v.contains("kind") || !v.at("kind").is_string()) {
        throw ConfigError("hypothesis.kind: expected full, exclusive or partial");
      }
      const auto kind = v.at("kind").get<std::string>();
      if (kind == "partial") {
        if (!v.contains("D")) {
          throw ConfigError("hypothesis.D: required for a partial hypothesis");
        }
        return OutcomeHypothesis::partial(read_number(v, "hypothesis.", "D", 0.0));
      }
      return parse_hypothesis(kind);
    }
  } catch (const Error& e) {
    throw ConfigError(fmt::format("hypothesis: {}", e.what()));
  }
  throw ConfigError("hypothesis: expected a string or an object");
}

Interval read_interval(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) {
    return {fallback, fallback};
  }
  const json& v = obj.at(key);
  if (v.is_number()) {
    return {v.get<double>(), v.get<double>()};
  }
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw ConfigError(fmt::format("search.{}: expected a number or [lo, hi]", key));
}

void parse_search(const json& obj, const Apparatus& base, RunConfig& cfg) {
  reject_unknown_keys(obj, "search.", {"lambda", "d", "L", "theta", "L0", "a", "x_max", "samples", "seed"});
  SearchSpace& sp = cfg.search;
  sp.lambda = read_interval(obj, "lambda", base.lambda);
  sp.d = read_interval(obj, "d", base.d);
  sp.L = read_interval(obj, "L", base.L);
  sp.theta = read_interval(obj, "theta", base.theta);
  sp.L0 = read_interval(obj, "L0", base.L1);
  sp.a = read_interval(obj, "a", base.a);
  sp.s = base.s;
  if (obj.contains("x_max")) {
    sp.x_max = read_number(obj, "search.", "x_max", 0.0);
  }
  cfg.search_samples = read_count(obj, "search.", "samples", cfg.search_samples);
  cfg.search_seed = read_count(obj, "search.", "seed", cfg.search_seed);
  try {
    check(sp);
  } catch (const Error& e) {
    throw ConfigError(fmt::format("search: {}", e.what()));
  }
  if (cfg.search_samples == 0) {
    throw ConfigError("search.samples: must be at least 1");
  }
}

void parse_scan(const json& obj, RunConfig& cfg) {
  reject_unknown_keys(obj, "scan.",
                      {"x_min", "x_max", "positions", "x_positions", "photons_per_position", "seed",
                       "freeze_detectors"});
  const double fs = fringe_spacing(cfg.apparatus);
  ScanConfig scan;
  if (obj.contains("x_positions")) {
    if (obj.contains("x_min") || obj.contains("x_max") || obj.contains("positions")) {
      throw ConfigError("scan.x_positions: cannot be combined with x_min/x_max/positions");
    }
    const json& xs = obj.at("x_positions");
    if (!xs.is_array()) {
      throw ConfigError("scan.x_positions: expected an array of numbers");
    }
    for (const auto& v : xs) {
      if (!v.is_number()) {
        throw ConfigError("scan.x_positions: expected an array of numbers");
      }
      scan.x_positions.push_back(v.get<double>());
    }
  } else {
    const double x_min = read_number(obj, "scan.", "x_min", -3.0 * fs);
    const double x_max = read_number(obj, "scan.", "x_max", 3.0 * fs);
    const auto n = read_count(obj, "scan.", "positions", kDefaultPositions);
    if (n < 2 || !(x_max > x_min)) {
      throw ConfigError("scan: need positions >= 2 and x_max > x_min");
    }
    scan = ScanConfig::uniform(x_min, x_max, n);
  }
  scan.photons_per_position = read_count(obj, "scan.", "photons_per_position", scan.photons_per_position);
  scan.seed = read_count(obj, "scan.", "seed", scan.seed);
  if (obj.contains("freeze_detectors")) {
    if (!obj.at("freeze_detectors").is_boolean()) {
      throw ConfigError("scan.freeze_detectors: expected true or false");
    }
    scan.freeze_detectors = obj.at("freeze_detectors").get<bool>();
  }
  if (scan.x_positions.empty()) {
    throw ConfigError("scan: no positions");
  }
  if (scan.photons_per_position == 0) {
    throw ConfigError("scan.photons_per_position: must be at least 1");
  }
  cfg.scan = std::move(scan);
  if (obj.contains("x_min") || obj.contains("x_max") || obj.contains("x_positions")) {
    cfg.validate_x_max =
        std::max(std::abs(cfg.scan.x_positions.front()), std::abs(cfg.scan.x_positions.back()));
  }
}

std::string timestamp_now() {
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(
                                                   std::chrono::system_clock::now())));
}

// Infinite limits have no JSON spelling; they are written as null.
json length_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json report_json(const DesignReport& r, const Apparatus& app) {
  return {{"F_s_m", r.F_s},
          {"w_prime_m", r.w_prime},
          {"w1_limit_m", length_json(r.w1_limit)},
          {"w2_limit_m", length_json(r.w2_limit)},
          {"required_w_m", length_json(r.required_w)},
          {"L12_m", r.L12},
          {"x_max_m", r.x_max},
          {"max_projection_m", r.max_projection},
          {"sampling_ok", r.sampling_ok},
          {"misdetection_free", r.misdetection_free},
          {"diaphragm_clear", r.diaphragm_clear},
          {"passed", r.passed()},
          {"warnings", r.warnings},
          {"apparatus", apparatus_json(app)}};
}

std::ofstream open_output(const RunConfig& cfg, const char* name) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  const auto path = cfg.out_dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError(fmt::format("--out: cannot write {}", path.string()));
  }
  return out;
}

void write_json(const RunConfig& cfg, const char* name, json doc) {
  if (cfg.timestamp) {
    doc["generated_at"] = timestamp_now();
  }
  auto out = open_output(cfg, name);
  out << doc.dump(2) << '\n';
}

void write_csv_preamble(const RunConfig& cfg, std::ostream& out, const char* header) {
  if (cfg.timestamp) {
    out << "# generated_at " << timestamp_now() << '\n';
  }
  out << header << '\n';
}

std::string num(double v) { return fmt::format("{:.12g}", v); }

double validate_extent(const RunConfig& cfg) {
  return std::max(cfg.validate_x_max, 3.0 * fringe_spacing(cfg.apparatus));
}

void print_report(const DesignReport& r, std::ostream& log) {
  log << fmt::format("F_s = {:.4g} mm, w' = {:.4g} mm, w1 = {:.4g} mm, w2 = {:.4g} mm, required w = {:.4g} mm\n",
                     r.F_s * 1e3, r.w_prime * 1e3, r.w1_limit * 1e3, r.w2_limit * 1e3, r.required_w * 1e3);
  log << fmt::format("L12 = {:.4g} mm, max footprint = {:.4g} mm\n", r.L12 * 1e3, r.max_projection * 1e3);
  log << fmt::format("sampling {}, mis-detection {}, diaphragm {}\n", r.sampling_ok ? "ok" : "FAILED",
                     r.misdetection_free ? "free" : "POSSIBLE", r.diaphragm_clear ? "clear" : "BLOCKED");
  for (const auto& w : r.warnings) {
    log << "warning: " << w << '\n';
  }
}

}  // namespace

RunConfig default_config() {
  RunConfig cfg;
  const double fs = fringe_spacing(cfg.apparatus);
  cfg.scan = ScanConfig::uniform(-3.0 * fs, 3.0 * fs, kDefaultPositions);
  cfg.search = SearchSpace::paper_point();
  return cfg;
}

RunConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
  }
  if (!doc.is_object()) {
    throw ConfigError("config: top level must be an object");
  }
  reject_unknown_keys(doc, "", {"apparatus", "scan", "hypothesis", "search"});
  if (!doc.contains("apparatus")) {
    throw ConfigError("apparatus: missing required section");
  }

  RunConfig cfg = default_config();
  cfg.apparatus = parse_apparatus(require_object(doc, "apparatus"));
  const double fs = fringe_spacing(cfg.apparatus);
  cfg.scan = ScanConfig::uniform(-3.0 * fs, 3.0 * fs, kDefaultPositions);
  if (doc.contains("scan")) {
    parse_scan(require_object(doc, "scan"), cfg);
  }
  if (doc.contains("hypothesis")) {
    cfg.hypothesis = parse_hypothesis_json(doc.at("hypothesis"));
  }
  cfg.search = SearchSpace::paper_point();
  cfg.search.lambda = {cfg.apparatus.lambda, cfg.apparatus.lambda};
  cfg.search.d = {cfg.apparatus.d, cfg.apparatus.d};
  cfg.search.L = {cfg.apparatus.L, cfg.apparatus.L};
  cfg.search.theta = {cfg.apparatus.theta, cfg.apparatus.theta};
  cfg.search.L0 = {cfg.apparatus.L1, cfg.apparatus.L1};
  cfg.search.a = {cfg.apparatus.a, cfg.apparatus.a};
  cfg.search.s = cfg.apparatus.s;
  if (doc.contains("search")) {
    parse_search(require_object(doc, "search"), cfg.apparatus, cfg);
  }
  return cfg;
}

int cmd_validate(const RunConfig& config, std::ostream& log) {
  const DesignReport report = validate(config.apparatus, validate_extent(config));
  write_json(config, "report.json", report_json(report, config.apparatus));
  print_report(report, log);
  log << (report.passed() ? "design valid\n" : "design INVALID\n");
  return report.passed() ? kSuccess : kFeasibilityFailure;
}

int cmd_scan(const RunConfig& config, std::ostream& log) {
  const Apparatus& app = config.apparatus;
  try {
    check(config.scan, app);
  } catch (const Error& e) {
    if (e.code() == Errc::sampling) {
      log << "warning: scan grid refused, sampling theorem violated: " << e.what() << '\n';
      return kFeasibilityFailure;
    }
    throw;
  }
  auto out = open_output(config, "curves.csv");
  write_csv_preamble(config, out, "x_m,I,I1,I2");
  for (double x : config.scan.x_positions) {
    out << num(x) << ',' << num(screen_intensity(app, x)) << ','
        << num(detector_intensity(app, x, DetectorId::one)) << ','
        << num(detector_intensity(app, x, DetectorId::two)) << '\n';
  }
  log << fmt::format("wrote {} curve points\n", config.scan.x_positions.size());
  return kSuccess;
}

int cmd_simulate(const RunConfig& config, std::ostream& log) {
  const Apparatus& app = config.apparatus;
  try {
    check(config.scan, app);
  } catch (const Error& e) {
    if (e.code() == Errc::sampling) {
      log << "warning: scan grid refused, sampling theorem violated: " << e.what() << '\n';
      return kFeasibilityFailure;
    }
    throw;
  }
  const DesignReport report = validate(app, validate_extent(config));
  if (!report.passed()) {
    log << "warning: apparatus does not pass validation; simulating anyway\n";
  }
  const ScanSummary summary = simulate_scan(app, config.scan, config.hypothesis);

  {
    auto out = open_output(config, "counts.csv");
    write_csv_preamble(config, out, "x_m,N,N1,N2,misdetected,I1_theory,I2_theory");
    for (const auto& r : summary.records) {
      out << num(r.x) << ',' << r.N << ',' << r.N1 << ',' << r.N2 << ',' << r.misdetected << ','
          << num(r.I1_theory) << ',' << num(r.I2_theory) << '\n';
    }
  }

  const double D = config.hypothesis.D;
  const DualityCheck duality = duality_check({D, summary.V_total});
  json doc = {{"V_total", summary.V_total},
              {"V_1", summary.V_1},
              {"V_2", summary.V_2},
              {"misdetection_rate", summary.misdetection_rate},
              {"duality_satisfied", duality.satisfied},
              {"duality_slack", duality.slack},
              {"D", D},
              {"hypothesis", to_string(config.hypothesis)},
              {"F_s_m", report.F_s},
              {"L12_m", report.L12},
              {"seed", config.scan.seed},
              {"photons_per_position", config.scan.photons_per_position},
              {"positions", summary.records.size()},
              {"freeze_detectors", config.scan.freeze_detectors},
              {"design_passed", report.passed()}};
  write_json(config, "summary.json", std::move(doc));
  log << fmt::format("V_total = {:.4f}, V_1 = {:.4f}, V_2 = {:.4f}, misdetection rate = {:.3g}\n",
                     summary.V_total, summary.V_1, summary.V_2, summary.misdetection_rate);
  return kSuccess;
}

int cmd_search(const RunConfig& config, std::ostream& log) {
  const SearchResult result = design_search(config.search, config.search_samples, config.search_seed);
  log << fmt::format("{} of {} samples feasible\n", result.feasible, result.evaluated);
  if (!result.best) {
    log << "no feasible design in the search space\n";
    return kNoFeasiblePoint;
  }
  write_json(config, "best_apparatus.json", {{"apparatus", apparatus_json(*result.best)}});
  write_json(config, "report.json", report_json(result.report, *result.best));
  print_report(result.report, log);
  return kSuccess;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mirror two-slit experiment: design validation and photon-count simulation", "twoslit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::string hypothesis;
  bool no_timestamp = false;
  bool freeze = false;
  app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "random seed (scan and search)");
  app.add_option("--hypothesis", hypothesis, "full | exclusive | partial:<D>");
  app.add_flag("--no-timestamp", no_timestamp, "omit generation timestamps from outputs");
  app.add_flag("--freeze-detectors", freeze, "keep the x = 0 detector layout for every scan position");

  auto* validate_cmd = app.add_subcommand("validate", "check the apparatus against the design constraints");
  auto* scan_cmd = app.add_subcommand("scan", "write noiseless intensity curves");
  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo photon-count scan");
  auto* search_cmd = app.add_subcommand("search", "random search for the design with the widest detector separation");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    RunConfig cfg = default_config();
    if (!config_path.empty()) {
      std::ifstream in(config_path, std::ios::binary);
      if (!in) {
        throw ConfigError(fmt::format("--config: cannot read {}", config_path));
      }
      const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      cfg = parse_config(text);
    }
    cfg.out_dir = out_dir;
    cfg.timestamp = !no_timestamp;
    if (seed) {
      cfg.scan.seed = *seed;
      cfg.search_seed = *seed;
    }
    if (!hypothesis.empty()) {
      try {
        cfg.hypothesis = parse_hypothesis(hypothesis);
      } catch (const Error& e) {
        throw ConfigError(fmt::format("--hypothesis: {}", e.what()));
      }
    }
    if (freeze) {
      cfg.scan.freeze_detectors = true;
    }

    if (validate_cmd->parsed()) {
      return cmd_validate(cfg, out);
    }
    if (scan_cmd->parsed()) {
      return cmd_scan(cfg, out);
    }
    if (simulate_cmd->parsed()) {
      return cmd_simulate(cfg, out);
    }
    if (search_cmd->parsed()) {
      return cmd_search(cfg, out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kFeasibilityFailure;
  }
  return kUsageError;
}

}  // namespace twoslit::cli
