// Command-line front end: constants, table1, simulate, prop-check,
// oracle-test, sigma2n.
//
// Exit codes: 0 pass, 1 statistical failure, 2 configuration error,
// 3 regime refusal.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rggclust/rggclust.hpp"

namespace {

using nlohmann::json;
using namespace rggclust;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kConfigError = 2;
constexpr int kRegimeRefusal = 3;

json read_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config \"" + path + "\"");
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError("config \"" + path + "\": " + e.what());
  }
}

void write_text(const std::string& dir, const std::string& name, const std::string& text) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  std::ofstream os(std::filesystem::path(dir) / name, std::ios::binary);
  os << text;
}

// Options shared by the small analytic subcommands. A --config file may
// carry the same keys; unknown keys are rejected.
struct AnalyticOptions {
  std::string config;
  std::string density;
  std::optional<double> r;
  std::vector<double> r_grid;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;

  json merged(std::initializer_list<const char*> allowed, const char* where) const {
    json j = config.empty() ? json::object() : read_json_file(config);
    detail::reject_unknown(j, allowed, where);
    if (!density.empty()) {
      try {
        j["density"] = json::parse(density);
      } catch (const json::parse_error& e) {
        throw ConfigError(std::string("--density: ") + e.what());
      }
    }
    if (r) j["r"] = *r;
    if (!r_grid.empty()) j["r_grid"] = r_grid;
    if (samples) j["samples"] = *samples;
    if (seed) j["master_seed"] = *seed;
    if (!j.contains("density")) throw ConfigError(std::string(where) + ": density is required");
    return j;
  }
};

CircularDensity parse_density(const json& j) {
  try {
    return density_from_json(j.at("density"));
  } catch (const DensityError& e) {
    throw ConfigError(e.what());
  }
}

double get_double(const json& j, const char* key) {
  try {
    return j.at(key).get<double>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("\"") + key + "\": " + e.what());
  }
}

int cmd_constants(const AnalyticOptions& opt, const std::string& out_dir) {
  const json j = opt.merged({"density", "r"}, "constants config");
  const auto f = parse_density(j);
  const double r = get_double(j, "r");
  if (!(r > 0.0 && r <= 0.25)) throw ConfigError("constants: r must lie in (0, 0.25]");
  const auto c = constants(f);
  const auto mu = mu_n(f, c, r);
  json out;
  out["density"] = density_to_json(f);
  out["r"] = r;
  out["moments"] = {{"e_f2", c.moments.e_f2},
                    {"e_fp2", c.moments.e_fp2},
                    {"e_ffpp", c.moments.e_ffpp},
                    {"e_fp2_2ffpp", c.moments.e_fp2_2ffpp}};
  out["a_f"] = c.a_f;
  out["b_f"] = c.b_f;
  out["c_f"] = c.c_f;
  out["sigma1_sq"] = c.sigma1_sq;
  out["mu_n_exact"] = mu.exact;
  out["mu_n_expansion"] = mu.expansion;
  out["sigma3n_sq_leading"] = sigma3n_sq_leading(r, c.moments.e_f2);
  out["two_path_probability"] = exact_twopath_probability(f, r);
  out["triangle_probability"] = exact_triangle_probability(f, r);
  const std::string text = out.dump(2) + "\n";
  std::cout << text;
  write_text(out_dir, "constants.json", text);
  return kPass;
}

int cmd_table1(double tolerance, const std::string& out_dir) {
  const auto cells = table1_reproduce(tolerance);
  std::ostringstream csv;
  csv << "kappa,mu,sigma1_sq,published,relative_error,pass\n";
  bool all = true;
  for (const auto& c : cells) {
    csv << c.kappa << ',' << c.mu << ','
        << format_double(c.sigma1_sq) << ',' << format_double(c.published) << ','
        << format_double(c.relative_error) << ',' << (c.pass ? "pass" : "FAIL") << '\n';
    all = all && c.pass;
  }
  std::cout << csv.str();
  std::size_t passed = 0;
  for (const auto& c : cells) passed += c.pass;
  std::cerr << passed << "/" << cells.size() << " cells within " << tolerance << " relative\n";
  write_text(out_dir, "table1.csv", csv.str());
  return all ? kPass : kFail;
}

int cmd_simulate(const std::string& config_path, std::optional<std::uint64_t> seed,
                 std::optional<std::size_t> reps, const std::string& out_dir, unsigned threads) {
  if (config_path.empty()) throw ConfigError("simulate: --config is required");
  json j = read_json_file(config_path);
  if (seed) j["master_seed"] = *seed;
  if (reps) j["replications"] = *reps;
  auto cfg = config_from_json(j);
  if (!out_dir.empty()) cfg.output.dir = out_dir;
  ExperimentResult res;
  try {
    res = run_experiment(cfg, threads);
  } catch (const RegimeRefusal& e) {
    std::cerr << "regime refusal: " << e.what() << "\n  n r^5 = " << e.diagnostics.n_r5
              << "\n  n r   = " << e.diagnostics.n_r << "\n  n^3 r^2 = " << e.diagnostics.n3_r2
              << '\n';
    return kRegimeRefusal;
  }
  write_experiment_outputs(res, cfg);
  const auto summary = summary_to_json(res.summary, cfg);
  std::cout << summary.dump(2) << '\n';
  const auto failures = evaluate_checks(res.summary, cfg.checks);
  for (const auto& f : failures) std::cerr << "check failed: " << f << '\n';
  return failures.empty() ? kPass : kFail;
}

int cmd_prop_check(const AnalyticOptions& opt, const std::string& out_dir) {
  const json j = opt.merged({"density", "r_grid", "probe_x"}, "prop-check config");
  const auto f = parse_density(j);
  std::vector<double> grid{0.02, 0.01, 0.005, 0.0025};
  if (j.contains("r_grid")) grid = j.at("r_grid").get<std::vector<double>>();
  if (grid.size() < 2) throw ConfigError("prop-check: r_grid needs at least two radii");
  const double probe = j.value("probe_x", 0.0);
  json out = json::array();
  bool ok = true;
  std::cout << "quantity        min_order  required  verdict\n";
  for (auto q : {ExpansionQuantity::EdgeGiven, ExpansionQuantity::TwoPath,
                 ExpansionQuantity::Triangle, ExpansionQuantity::MuN}) {
    const auto check = expansion_scaling_check(f, q, grid, probe);
    const double required = q == ExpansionQuantity::MuN ? 2.5 : 3.5;
    const bool exact = check.all_errors_zero();
    const bool pass = exact || check.min_order() >= required;
    ok = ok && pass;
    json row{{"quantity", to_string(q)}, {"required_order", required}, {"pass", pass},
             {"expansion_exact", exact}};
    for (const auto& p : check.points) {
      row["points"].push_back(
          {{"r", p.r}, {"exact", p.exact}, {"expansion", p.expansion}, {"error", p.error}});
    }
    for (double o : check.orders) row["orders"].push_back(std::isnan(o) ? json(nullptr) : json(o));
    out.push_back(row);
    char line[128];
    std::snprintf(line, sizeof line, "%-15s %9.3f  %8.1f  %s\n", to_string(q),
                  exact ? std::numeric_limits<double>::infinity() : check.min_order(), required,
                  pass ? (exact ? "pass (expansion exact)" : "pass") : "FAIL");
    std::cout << line;
  }
  write_text(out_dir, "prop_check.json", out.dump(2) + "\n");
  return ok ? kPass : kFail;
}

int cmd_oracle_test(std::size_t instances, std::uint64_t seed, std::size_t max_n,
                    const std::string& out_dir) {
  auto res = oracle_equivalence_sweep(instances, seed, max_n);
  // Wraparound fixture: {0, 0.4, 0.8} at r = 0.4 is one triangle.
  PointSample fixture{{0.0, 0.4, 0.8}, {}};
  const auto fc = counts(fixture, Radius(0.4));
  const bool fixture_ok = fc.triangles == 1 && fc == brute_force_counts(fixture, Radius(0.4));
  json out{{"instances", instances},
           {"seed", seed},
           {"mismatches", res.mismatches.size()},
           {"wraparound_fixture", fixture_ok}};
  for (const auto& m : res.mismatches) {
    std::cerr << "mismatch at instance " << m.instance << " (n=" << m.n << ", r=" << m.r
              << "): fast " << m.fast.edges << '/' << m.fast.ordered_two_paths << '/'
              << m.fast.triangles << " vs oracle " << m.oracle.edges << '/'
              << m.oracle.ordered_two_paths << '/' << m.oracle.triangles << '\n';
  }
  const bool pass = res.mismatches.empty() && fixture_ok;
  std::cout << "oracle-test: " << instances << " instances, " << res.mismatches.size()
            << " mismatches, wraparound fixture " << (fixture_ok ? "ok" : "FAILED") << " -> "
            << (pass ? "pass" : "FAIL") << '\n';
  write_text(out_dir, "oracle_test.json", out.dump(2) + "\n");
  return pass ? kPass : kFail;
}

int cmd_sigma2n(const AnalyticOptions& opt, unsigned threads, const std::string& out_dir) {
  const json j = opt.merged({"density", "r", "samples", "master_seed"}, "sigma2n config");
  const auto f = parse_density(j);
  const double r = get_double(j, "r");
  if (!(r > 0.0 && r <= 0.1)) throw ConfigError("sigma2n: r must lie in (0, 0.1]");
  const std::size_t m = j.value("samples", std::size_t{1000000});
  if (m < 100000) throw ConfigError("sigma2n: samples must be >= 1e5");
  const std::uint64_t seed = j.value("master_seed", std::uint64_t{1});
  const auto c = constants(f);
  const double mu = mu_n(f, c, r).exact;
  const auto est = sigma2n_sq_mc(f, r, mu, m, RngStream(seed, 0), threads);
  const double rel = est.standard_error / est.estimate;
  json out{{"density", density_to_json(f)},
           {"r", r},
           {"mu_n", mu},
           {"samples", m},
           {"master_seed", seed},
           {"estimate", est.estimate},
           {"standard_error", est.standard_error},
           {"relative_standard_error", rel},
           {"estimate_over_r3", est.estimate / (r * r * r)}};
  const std::string text = out.dump(2) + "\n";
  std::cout << text;
  write_text(out_dir, "sigma2n.json", text);
  const bool pass = est.estimate > 0.0 && rel < 0.02;
  std::cerr << "sigma2n: relative standard error " << rel << (pass ? " < 0.02, pass" : ", FAIL")
            << '\n';
  return pass ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random geometric graphs on the circle: clustering coefficient constants and CLT checks"};
  app.require_subcommand(1);

  std::string out_dir;
  unsigned threads = 0;
  AnalyticOptions analytic;
  double tolerance = 0.005;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::size_t instances = 1000;
  std::size_t max_n = 60;

  auto add_analytic = [&](CLI::App* sub, bool with_r) {
    sub->add_option("--config", analytic.config, "JSON config file");
    sub->add_option("--density", analytic.density, "density spec as JSON, e.g. '{\"kind\":\"uniform\"}'");
    if (with_r) sub->add_option("--r", analytic.r, "connection radius");
    sub->add_option("--out", out_dir, "output directory");
  };

  auto* constants_cmd = app.add_subcommand("constants", "asymptotic constants and mu_n for a density");
  add_analytic(constants_cmd, true);

  auto* table1_cmd = app.add_subcommand("table1", "reproduce the von Mises sigma_1^2 table");
  table1_cmd->add_option("--tolerance", tolerance, "relative tolerance per cell (default 0.005)");
  table1_cmd->add_option("--out", out_dir, "output directory");

  auto* simulate_cmd = app.add_subcommand("simulate", "replicated CLT experiment");
  simulate_cmd->add_option("--config", config_path, "experiment config JSON")->required();
  simulate_cmd->add_option("--seed", seed, "override master seed");
  simulate_cmd->add_option("--reps", reps, "override replication count");
  simulate_cmd->add_option("--out", out_dir, "output directory");
  simulate_cmd->add_option("--threads", threads, "worker threads (0 = all cores)");

  auto* prop_cmd = app.add_subcommand("prop-check", "remainder orders of the small-r expansions");
  add_analytic(prop_cmd, false);
  prop_cmd->add_option("--r-grid", analytic.r_grid, "halving grid of radii");

  auto* oracle_cmd = app.add_subcommand("oracle-test", "fast counts vs brute force");
  oracle_cmd->add_option("--instances", instances, "random instances (default 1000)");
  oracle_cmd->add_option("--seed", seed, "master seed");
  oracle_cmd->add_option("--max-n", max_n, "largest vertex count (default 60)");
  oracle_cmd->add_option("--out", out_dir, "output directory");

  auto* sigma_cmd = app.add_subcommand("sigma2n", "Monte Carlo estimate of sigma_2n^2");
  add_analytic(sigma_cmd, true);
  sigma_cmd->add_option("--samples", analytic.samples, "Monte Carlo samples (default 1e6)");
  sigma_cmd->add_option("--seed", analytic.seed, "master seed");
  sigma_cmd->add_option("--threads", threads, "worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfigError;
  }

  try {
    if (*constants_cmd) return cmd_constants(analytic, out_dir);
    if (*table1_cmd) return cmd_table1(tolerance, out_dir);
    if (*simulate_cmd) return cmd_simulate(config_path, seed, reps, out_dir, threads);
    if (*prop_cmd) return cmd_prop_check(analytic, out_dir);
    if (*oracle_cmd) return cmd_oracle_test(instances, seed.value_or(20240601), max_n, out_dir);
    if (*sigma_cmd) return cmd_sigma2n(analytic, threads, out_dir);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DensityError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFail;
  }
  return kConfigError;
}
