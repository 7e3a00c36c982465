#pragma once

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rggclust/analytics.hpp"
#include "rggclust/density.hpp"
#include "rggclust/geometry.hpp"
#include "rggclust/parallel.hpp"
#include "rggclust/rng.hpp"
#include "rggclust/sampler.hpp"
#include "rggclust/stats.hpp"

namespace rggclust {

inline constexpr const char* kCodeVersion = "rggclust 1.0.0";

/// Invalid or inconsistent experiment configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested (n, r) falls outside every CLT regime (CLI exit code 3).
class RegimeRefusal : public std::runtime_error {
 public:
  RegimeRefusal(const std::string& what, RegimeDiagnostics d)
      : std::runtime_error(what), diagnostics(d) {}
  RegimeDiagnostics diagnostics;
};

struct RadiusRule {
  std::optional<double> explicit_r;
  double c{1.0};
  double alpha{0.5};

  /// r = explicit value, or c * n^(-alpha).
  double resolve(std::size_t n) const {
    return explicit_r ? *explicit_r : c * std::pow(static_cast<double>(n), -alpha);
  }
};

struct SummaryChecks {
  std::optional<double> ks_max;
  std::optional<double> mean_abs_max;
  std::optional<double> var_abs_dev_max;
};

struct OutputPaths {
  std::string dir{"."};
  std::string records_csv{"records.csv"};
  std::string summary_json{"summary.json"};
  std::string plot_script{"plot_z.py"};
};

struct ExperimentConfig {
  nlohmann::json density_spec{{"kind", "uniform"}};
  std::size_t n{1000};
  RadiusRule radius;
  std::optional<Regime> forced_regime;
  std::size_t replications{100};
  std::uint64_t master_seed{1};
  std::size_t sigma2n_samples{2000000};
  RegimeThresholds thresholds;
  SummaryChecks checks;
  OutputPaths output;
  bool record_timing{false};
};

namespace detail {

inline void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                           const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(where + ": unknown key \"" + key + "\"");
  }
}

}  // namespace detail

/// Parses an experiment config. Unknown keys anywhere are an error.
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  detail::reject_unknown(j,
                         {"density", "n", "r", "r_rule", "regime", "replications", "master_seed",
                          "sigma2n_samples", "thresholds", "checks", "output", "record_timing"},
                         "config");
  try {
    if (!j.contains("density")) throw ConfigError("config: missing \"density\"");
    c.density_spec = j.at("density");
    (void)density_from_json(c.density_spec);
    if (!j.contains("n")) throw ConfigError("config: missing \"n\"");
    c.n = j.at("n").get<std::size_t>();
    if (j.contains("r") == j.contains("r_rule")) {
      throw ConfigError("config: exactly one of \"r\" or \"r_rule\" is required");
    }
    if (j.contains("r")) {
      c.radius.explicit_r = j.at("r").get<double>();
    } else {
      const auto& rule = j.at("r_rule");
      detail::reject_unknown(rule, {"c", "alpha"}, "r_rule");
      c.radius.c = rule.value("c", 1.0);
      c.radius.alpha = rule.at("alpha").get<double>();
    }
    if (j.contains("regime")) {
      const auto s = j.at("regime").get<std::string>();
      if (s != "auto") c.forced_regime = regime_from_string(s);
    }
    c.replications = j.value("replications", c.replications);
    c.master_seed = j.value("master_seed", c.master_seed);
    c.sigma2n_samples = j.value("sigma2n_samples", c.sigma2n_samples);
    c.record_timing = j.value("record_timing", false);
    if (j.contains("thresholds")) {
      const auto& t = j.at("thresholds");
      detail::reject_unknown(t,
                             {"dense_min_nr5", "intermediate_min_nr", "intermediate_max_nr5",
                              "sparse_max_nr", "sparse_min_n3r2"},
                             "thresholds");
      auto& th = c.thresholds;
      th.dense_min_nr5 = t.value("dense_min_nr5", th.dense_min_nr5);
      th.intermediate_min_nr = t.value("intermediate_min_nr", th.intermediate_min_nr);
      th.intermediate_max_nr5 = t.value("intermediate_max_nr5", th.intermediate_max_nr5);
      th.sparse_max_nr = t.value("sparse_max_nr", th.sparse_max_nr);
      th.sparse_min_n3r2 = t.value("sparse_min_n3r2", th.sparse_min_n3r2);
    }
    if (j.contains("checks")) {
      const auto& k = j.at("checks");
      detail::reject_unknown(k, {"ks_max", "mean_abs_max", "var_abs_dev_max"}, "checks");
      if (k.contains("ks_max")) c.checks.ks_max = k.at("ks_max").get<double>();
      if (k.contains("mean_abs_max")) c.checks.mean_abs_max = k.at("mean_abs_max").get<double>();
      if (k.contains("var_abs_dev_max")) {
        c.checks.var_abs_dev_max = k.at("var_abs_dev_max").get<double>();
      }
    }
    if (j.contains("output")) {
      const auto& o = j.at("output");
      detail::reject_unknown(o, {"dir", "records_csv", "summary_json", "plot_script"}, "output");
      c.output.dir = o.value("dir", c.output.dir);
      c.output.records_csv = o.value("records_csv", c.output.records_csv);
      c.output.summary_json = o.value("summary_json", c.output.summary_json);
      c.output.plot_script = o.value("plot_script", c.output.plot_script);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const DensityError& e) {
    throw ConfigError(e.what());
  } catch (const std::invalid_argument& e) {
    if (dynamic_cast<const ConfigError*>(&e)) throw;
    throw ConfigError(e.what());
  }
  if (c.replications < 2) throw ConfigError("config: replications must be >= 2");
  if (c.n < 3) throw ConfigError("config: n must be >= 3");
  const double r = c.radius.resolve(c.n);
  if (!(r > 0.0 && r <= 0.5)) {
    throw ConfigError("config: radius resolves to " + std::to_string(r) + ", outside (0, 0.5]");
  }
  return c;
}

inline nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["density"] = c.density_spec;
  j["n"] = c.n;
  if (c.radius.explicit_r) {
    j["r"] = *c.radius.explicit_r;
  } else {
    j["r_rule"] = {{"c", c.radius.c}, {"alpha", c.radius.alpha}};
  }
  j["regime"] = c.forced_regime ? to_string(*c.forced_regime) : "auto";
  j["replications"] = c.replications;
  j["master_seed"] = c.master_seed;
  j["sigma2n_samples"] = c.sigma2n_samples;
  j["thresholds"] = {{"dense_min_nr5", c.thresholds.dense_min_nr5},
                     {"intermediate_min_nr", c.thresholds.intermediate_min_nr},
                     {"intermediate_max_nr5", c.thresholds.intermediate_max_nr5},
                     {"sparse_max_nr", c.thresholds.sparse_max_nr},
                     {"sparse_min_n3r2", c.thresholds.sparse_min_n3r2}};
  j["record_timing"] = c.record_timing;
  return j;
}

struct ReplicationRecord {
  std::uint64_t index{0};
  SubgraphCounts counts;
  std::optional<double> clustering;
  std::optional<double> z;
  double wall_ms{0.0};
};

struct ExperimentSummary {
  std::size_t replications{0};
  std::size_t effective{0};
  std::size_t skipped{0};
  SampleMoments z;
  double ks{0.0};
  double clustering_mean{0.0};
  double clustering_stderr{0.0};
  double r{0.0};
  RegimeDiagnostics regime;
  RegimeConstants constants;
  double e_f2{1.0};
};

struct ExperimentResult {
  std::vector<ReplicationRecord> records;
  ExperimentSummary summary;
};

/// Summary statistics over completed (non-skipped) records.
inline void summarize_records(const std::vector<ReplicationRecord>& records, ExperimentSummary& s) {
  std::vector<double> z, cn;
  for (const auto& rec : records) {
    if (rec.z) z.push_back(*rec.z);
    if (rec.clustering) cn.push_back(*rec.clustering);
  }
  s.replications = records.size();
  s.effective = z.size();
  s.skipped = records.size() - z.size();
  s.z = sample_moments(z);
  s.ks = z.size() >= 2 ? ks_statistic(z) : 1.0;
  const auto c = sample_moments(cn);
  s.clustering_mean = c.mean;
  s.clustering_stderr = cn.size() > 1 ? std::sqrt(c.variance / static_cast<double>(cn.size())) : 0.0;
}

struct PreparedExperiment {
  CircularDensity density;
  AsymptoticConstants asymptotic;
  double r{0.0};
  RegimeDiagnostics regime;
  RegimeConstants constants;
};

/// Resolves r, classifies the regime and computes the centering and scaling
/// constants. Throws RegimeRefusal when no CLT case applies.
inline PreparedExperiment prepare_experiment(const ExperimentConfig& cfg, unsigned threads = 1) {
  PreparedExperiment p{density_from_json(cfg.density_spec), {}, cfg.radius.resolve(cfg.n), {}, {}};
  p.asymptotic = constants(p.density);
  p.regime = classify_regime(cfg.n, p.r, p.density, p.asymptotic, cfg.thresholds);
  if (p.regime.regime == Regime::Degenerate) {
    throw RegimeRefusal("degenerate regime: n^3 r^2 = " + std::to_string(p.regime.n3_r2) +
                            " is below the threshold; the expected triangle count vanishes",
                        p.regime);
  }
  if (cfg.forced_regime) {
    p.regime.regime = *cfg.forced_regime;
  } else if (p.regime.regime == Regime::Ambiguous) {
    throw RegimeRefusal("no CLT regime applies (n r^5 = " + std::to_string(p.regime.n_r5) +
                            ", n r = " + std::to_string(p.regime.n_r) +
                            "); force one with \"regime\"",
                        p.regime);
  }
  if (p.regime.regime == Regime::DenseI && !(p.asymptotic.sigma1_sq > 0.0)) {
    throw ConfigError("Case I requested but sigma_1^2 = 0 for this density");
  }
  if (p.r > 0.25) throw ConfigError("centering needs mu_n, which is computed only for r <= 0.25");
  const auto mu = mu_n(p.density, p.asymptotic, p.r);
  p.constants.mu_n_exact = mu.exact;
  p.constants.mu_n_expansion = mu.expansion;
  p.constants.sigma1_sq = p.asymptotic.sigma1_sq;
  p.constants.sigma3n_sq_leading = sigma3n_sq_leading(p.r, p.asymptotic.moments.e_f2);
  if (p.regime.regime == Regime::IntermediateII) {
    // Replication indices are < 2^63; this stream cannot collide with them.
    const RngStream stream(cfg.master_seed, std::numeric_limits<std::uint64_t>::max());
    p.constants.sigma2n_sq =
        sigma2n_sq_mc(p.density, p.r, mu.exact, cfg.sigma2n_samples, stream, threads);
  }
  return p;
}

/// One replication: sample, count, standardize.
inline ReplicationRecord run_replication(const ExperimentConfig& cfg, const PreparedExperiment& p,
                                         std::uint64_t index) {
  const auto t0 = std::chrono::steady_clock::now();
  RngStream stream = derive_stream(cfg.master_seed, index);
  const auto sample = sample_points(p.density, cfg.n, stream);
  ReplicationRecord rec;
  rec.index = index;
  rec.counts = counts(sample, Radius(p.r));
  rec.clustering = clustering_coefficient(rec.counts);
  if (rec.clustering) {
    StandardizationInputs in{p.asymptotic.moments.e_f2, p.asymptotic.sigma1_sq,
                             p.constants.sigma2n_sq
                                 ? std::optional<double>(p.constants.sigma2n_sq->estimate)
                                 : std::nullopt};
    rec.z = standardize(*rec.clustering, p.constants.mu_n_exact, p.regime.regime, cfg.n, p.r, in);
  }
  if (cfg.record_timing) {
    rec.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }
  return rec;
}

/// Runs all replications; records come back in index order whatever the
/// thread count.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned threads = 1) {
  const auto p = prepare_experiment(cfg, threads);
  ExperimentResult result;
  result.records.resize(cfg.replications);
  parallel_for(cfg.replications, threads,
               [&](std::size_t i) { result.records[i] = run_replication(cfg, p, i); });
  auto& s = result.summary;
  s.r = p.r;
  s.regime = p.regime;
  s.constants = p.constants;
  s.e_f2 = p.asymptotic.moments.e_f2;
  summarize_records(result.records, s);
  return result;
}

// ---------------------------------------------------------------------------
// Serialization.

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline constexpr const char* kRecordsHeader = "index,edges,two_paths,triangles,C_n,z,ms,status";

inline void write_records_csv(std::ostream& os, const std::vector<ReplicationRecord>& records) {
  os << kRecordsHeader << '\n';
  for (const auto& r : records) {
    os << r.index << ',' << r.counts.edges << ',' << r.counts.ordered_two_paths << ','
       << r.counts.triangles << ',' << (r.clustering ? format_double(*r.clustering) : "NA") << ','
       << (r.z ? format_double(*r.z) : "NA") << ',' << format_double(r.wall_ms) << ','
       << (r.z ? "ok" : "skip:no_two_paths") << '\n';
  }
}

inline std::vector<ReplicationRecord> read_records_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kRecordsHeader) {
    throw std::runtime_error("records CSV: unexpected header");
  }
  std::vector<ReplicationRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 8) throw std::runtime_error("records CSV: bad row \"" + line + "\"");
    ReplicationRecord r;
    r.index = std::stoull(f[0]);
    r.counts.edges = std::stoull(f[1]);
    r.counts.ordered_two_paths = std::stoull(f[2]);
    r.counts.triangles = std::stoull(f[3]);
    if (f[4] != "NA") r.clustering = std::strtod(f[4].c_str(), nullptr);
    if (f[5] != "NA") r.z = std::strtod(f[5].c_str(), nullptr);
    r.wall_ms = std::strtod(f[6].c_str(), nullptr);
    out.push_back(r);
  }
  return out;
}

inline nlohmann::json summary_to_json(const ExperimentSummary& s, const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["code_version"] = kCodeVersion;
  j["config"] = config_to_json(cfg);
  j["r"] = s.r;
  j["regime"] = to_string(s.regime.regime);
  j["regime_diagnostics"] = {{"n_r5", s.regime.n_r5}, {"n_r", s.regime.n_r}, {"n3_r2", s.regime.n3_r2}};
  j["replications"] = s.replications;
  j["R_effective"] = s.effective;
  j["skipped"] = s.skipped;
  j["z"] = {{"mean", s.z.mean},
            {"variance", s.z.variance},
            {"skewness", s.z.skewness},
            {"excess_kurtosis", s.z.excess_kurtosis}};
  j["ks"] = s.ks;
  j["C_n"] = {{"mean", s.clustering_mean}, {"stderr", s.clustering_stderr}};
  j["mu_n"] = {{"exact", s.constants.mu_n_exact}, {"expansion", s.constants.mu_n_expansion}};
  j["e_f2"] = s.e_f2;
  j["sigma1_sq"] = s.constants.sigma1_sq;
  j["sigma3n_sq_leading"] = s.constants.sigma3n_sq_leading;
  if (s.constants.sigma2n_sq) {
    j["sigma2n_sq"] = {{"estimate", s.constants.sigma2n_sq->estimate},
                       {"standard_error", s.constants.sigma2n_sq->standard_error},
                       {"samples", s.constants.sigma2n_sq->samples}};
  }
  return j;
}

/// Python script that plots a z histogram against N(0,1) and a normal QQ
/// plot, reading only the records CSV.
inline std::string plot_script(const std::string& records_csv) {
  std::ostringstream os;
  os << "#!/usr/bin/env python3\n"
        "# Generated by rggclust simulate. Reads the records CSV only.\n"
        "import csv, math, sys\n"
        "import matplotlib\n"
        "matplotlib.use('Agg')\n"
        "import matplotlib.pyplot as plt\n"
        "from statistics import NormalDist\n\n"
        "path = sys.argv[1] if len(sys.argv) > 1 else '"
     << records_csv
     << "'\n"
        "with open(path) as fh:\n"
        "    z = sorted(float(r['z']) for r in csv.DictReader(fh) if r['z'] != 'NA')\n"
        "m = len(z)\n"
        "nd = NormalDist()\n"
        "fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))\n"
        "ax1.hist(z, bins=max(10, int(math.sqrt(m))), density=True, alpha=0.6)\n"
        "xs = [-4 + 8 * i / 400 for i in range(401)]\n"
        "ax1.plot(xs, [nd.pdf(x) for x in xs], 'k-')\n"
        "ax1.set_title('standardized C_n vs N(0,1)')\n"
        "q = [nd.inv_cdf((i + 0.5) / m) for i in range(m)]\n"
        "ax2.plot(q, z, '.', ms=3)\n"
        "ax2.plot([-4, 4], [-4, 4], 'k--')\n"
        "ax2.set_xlabel('normal quantile')\n"
        "ax2.set_ylabel('z')\n"
        "fig.tight_layout()\n"
        "fig.savefig(path.rsplit('.', 1)[0] + '_z.png', dpi=120)\n";
  return os.str();
}

/// Writes records CSV, summary JSON and plot script under cfg.output.dir.
inline void write_experiment_outputs(const ExperimentResult& res, const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  const fs::path dir(cfg.output.dir);
  fs::create_directories(dir);
  {
    std::ofstream os(dir / cfg.output.records_csv, std::ios::binary);
    write_records_csv(os, res.records);
  }
  {
    std::ofstream os(dir / cfg.output.summary_json, std::ios::binary);
    os << summary_to_json(res.summary, cfg).dump(2) << '\n';
  }
  if (!cfg.output.plot_script.empty()) {
    std::ofstream os(dir / cfg.output.plot_script, std::ios::binary);
    os << plot_script(cfg.output.records_csv);
  }
}

/// Failed checks, one message each; empty means pass.
inline std::vector<std::string> evaluate_checks(const ExperimentSummary& s, const SummaryChecks& c) {
  std::vector<std::string> failures;
  if (c.ks_max && !(s.ks < *c.ks_max)) {
    failures.push_back("KS " + format_double(s.ks) + " >= " + format_double(*c.ks_max));
  }
  if (c.mean_abs_max && !(std::abs(s.z.mean) < *c.mean_abs_max)) {
    failures.push_back("|mean z| " + format_double(std::abs(s.z.mean)) + " >= " +
                       format_double(*c.mean_abs_max));
  }
  if (c.var_abs_dev_max && !(std::abs(s.z.variance - 1.0) < *c.var_abs_dev_max)) {
    failures.push_back("|var z - 1| " + format_double(std::abs(s.z.variance - 1.0)) + " >= " +
                       format_double(*c.var_abs_dev_max));
  }
  return failures;
}

// ---------------------------------------------------------------------------
// Expansion remainder orders and the sigma_1^2 table.

enum class ExpansionQuantity { EdgeGiven, TwoPath, Triangle, MuN };

inline const char* to_string(ExpansionQuantity q) {
  switch (q) {
    case ExpansionQuantity::EdgeGiven: return "edge_given_x";
    case ExpansionQuantity::TwoPath: return "two_path";
    case ExpansionQuantity::Triangle: return "triangle";
    case ExpansionQuantity::MuN: return "mu_n";
  }
  return "?";
}

struct ExpansionPoint {
  double r{0.0};
  double exact{0.0};
  double expansion{0.0};
  double error{0.0};
};

struct ExpansionCheck {
  ExpansionQuantity quantity{ExpansionQuantity::EdgeGiven};
  std::vector<ExpansionPoint> points;
  /// log2(error_k / error_{k+1}) for consecutive halvings; NaN when an error is 0.
  std::vector<double> orders;

  double min_order() const {
    double m = std::numeric_limits<double>::infinity();
    for (double o : orders) m = std::min(m, o);
    return m;
  }
  bool all_errors_zero() const {
    for (const auto& p : points) {
      if (p.error != 0.0) return false;
    }
    return true;
  }
};

/// Compares exact probabilities with their r-expansions on a halving grid.
/// The conditional edge probability is evaluated at x = probe_x.
inline ExpansionCheck expansion_scaling_check(const CircularDensity& f, ExpansionQuantity q,
                                              const std::vector<double>& r_grid,
                                              double probe_x = 0.0) {
  const auto c = constants(f);
  ExpansionCheck out;
  out.quantity = q;
  for (double r : r_grid) {
    if (!(r > 0.0 && r <= 0.25)) {
      throw std::invalid_argument("expansion_scaling_check: r must lie in (0, 0.25]");
    }
    ExpansionPoint p;
    p.r = r;
    switch (q) {
      case ExpansionQuantity::EdgeGiven:
        p.exact = f.is_uniform() ? 2.0 * r : edge_probability_given(f, r, probe_x);
        p.expansion = edge_probability_expansion(f, r, probe_x);
        break;
      case ExpansionQuantity::TwoPath:
        p.exact = exact_twopath_probability(f, r);
        p.expansion = twopath_probability_expansion(c.moments, r);
        break;
      case ExpansionQuantity::Triangle:
        p.exact = exact_triangle_probability(f, r);
        p.expansion = triangle_probability_expansion(c.moments, r);
        break;
      case ExpansionQuantity::MuN: {
        const auto mu = mu_n(f, c, r);
        p.exact = mu.exact;
        p.expansion = mu.expansion;
        break;
      }
    }
    p.error = std::abs(p.exact - p.expansion);
    out.points.push_back(p);
  }
  for (std::size_t k = 0; k + 1 < out.points.size(); ++k) {
    const double a = out.points[k].error, b = out.points[k + 1].error;
    const double ratio = out.points[k].r / out.points[k + 1].r;
    out.orders.push_back(a > 0.0 && b > 0.0 ? std::log(a / b) / std::log(ratio)
                                            : std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

struct Table1Cell {
  double kappa{0.0};
  double mu{0.0};
  double sigma1_sq{0.0};
  double published{0.0};
  double relative_error{0.0};
  bool pass{false};
};

/// Published sigma_1^2 for the von Mises family, indexed by kappa.
inline constexpr std::array<std::pair<double, double>, 4> kPublishedSigma1Sq{
    {{0.1, 31.78}, {0.5, 1264.83}, {1.0, 13924.35}, {5.0, 13646828.67}}};
inline constexpr std::array<double, 3> kTable1Locations{0.1, 0.3, 0.5};

inline std::vector<Table1Cell> table1_reproduce(double relative_tolerance = 0.005) {
  std::vector<Table1Cell> cells;
  for (double mu : kTable1Locations) {
    for (const auto& [kappa, published] : kPublishedSigma1Sq) {
      Table1Cell cell{kappa, mu, constants(CircularDensity::von_mises(kappa, mu)).sigma1_sq,
                      published};
      cell.relative_error = std::abs(cell.sigma1_sq - published) / published;
      cell.pass = cell.relative_error <= relative_tolerance;
      cells.push_back(cell);
    }
  }
  return cells;
}


// ---------------------------------------------------------------------------
// Fast counting vs the brute-force oracle.

struct OracleMismatch {
  std::size_t instance{0};
  std::size_t n{0};
  double r{0.0};
  SubgraphCounts fast;
  SubgraphCounts oracle;
};

struct OracleSweepResult {
  std::size_t instances{0};
  std::vector<OracleMismatch> mismatches;
};

/// Random instances with n in [1, max_n] and r in (0, 1/2]; points come from
/// a uniform or a concentrated von Mises density on alternate instances.
inline OracleSweepResult oracle_equivalence_sweep(std::size_t instances, std::uint64_t seed,
                                                  std::size_t max_n = 60) {
  const auto flat = CircularDensity::uniform();
  const auto peaked = CircularDensity::von_mises(3.0, 1.0);
  OracleSweepResult out;
  out.instances = instances;
  for (std::size_t i = 0; i < instances; ++i) {
    RngStream rng = derive_stream(seed, i);
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform01() * static_cast<double>(max_n));
    const double r = 0.5 * (1.0 - rng.uniform01());
    const auto sample = sample_points(i % 2 == 0 ? flat : peaked, n, rng);
    const Radius radius(r);
    const auto fast = counts(sample, radius);
    const auto oracle = brute_force_counts(sample, radius);
    if (!(fast == oracle)) out.mismatches.push_back({i, n, r, fast, oracle});
  }
  return out;
}

}  // namespace rggclust
