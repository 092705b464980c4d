#include "dqwifi/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "dqwifi/analysis.hpp"
#include "dqwifi/csv.hpp"
#include "dqwifi/lts_exact.hpp"
#include "dqwifi/mc_engine.hpp"
#include "dqwifi/parallel.hpp"
#include "dqwifi/params_io.hpp"
#include "dqwifi/svg_chart.hpp"

namespace dqwifi::cli {
namespace {

namespace fs = std::filesystem;

// Flags that override WifiParams fields directly.
const std::map<std::string, std::string>& param_flags() {
  static const std::map<std::string, std::string> m{
      {"rate", "data_rate"},
      {"packet_size", "default_packet_size"},
      {"rts_cts", "rts_cts_enabled"},
  };
  return m;
}

bool is_experiment_key(const std::string& key) {
  const auto& keys = experiment_keys();
  return std::find(keys.begin(), keys.end(), key) != keys.end();
}

class Artifacts {
 public:
  Artifacts(const ExperimentConfig& config, std::ostream& out)
      : dir_(config.out_dir), out_(out) {
    fs::create_directories(dir_);
  }

  void write(const std::string& name, const std::string& content) {
    const fs::path path = dir_ / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << content;
    out_ << "wrote " << path.string() << '\n';
  }

  template <typename Writer>
  void write_with(const std::string& name, Writer&& writer) {
    std::ostringstream os;
    writer(os);
    write(name, os.str());
  }

 private:
  fs::path dir_;
  std::ostream& out_;
};

std::string num(double v) { return format_double(v); }

std::uint64_t seed_of(const ExperimentConfig& c) { return c.seed.value_or(0); }

std::size_t count_setting(const ExperimentConfig& c, const std::string& key,
                          const std::string& fallback) {
  const long long v = parse_int(c.get(key, fallback));
  if (v < 1) throw std::invalid_argument(key + " must be >= 1");
  return static_cast<std::size_t>(v);
}

std::vector<int> stations_setting(const ExperimentConfig& c, const std::string& fallback) {
  std::vector<int> s = parse_int_list(c.get("stations", fallback));
  for (int n : s) {
    if (n < 1) throw std::invalid_argument("station counts must be >= 1");
  }
  return s;
}

int cmd_ergodic(const ExperimentConfig& c, Artifacts& art) {
  const auto stations = stations_setting(c, "5");
  const std::size_t outcomes = count_setting(c, "outcomes", "10000");
  std::vector<int> exponents{c.params.cw_min_exponent};
  if (c.has("window_exponents")) exponents = parse_size_range(c.get("window_exponents", ""));

  const auto points =
      saturation_sweep(c.params, stations, exponents, outcomes, seed_of(c), c.workers);

  CsvTable summary{{"n_stations", "window", "throughput_mbps", "elapsed_throughput_mbps",
                    "loss_fraction", "mean_latency_us", "p90_latency_us"},
                   {}};
  for (const SaturationPoint& p : points) {
    summary.rows.push_back({std::to_string(p.n_stations), std::to_string(p.window),
                            num(p.throughput_mbps), num(p.elapsed_mbps),
                            num(p.loss_fraction), num(p.mean_latency), num(p.p90_latency)});
    const std::string tag =
        "n" + std::to_string(p.n_stations) + "_w" + std::to_string(p.window);
    art.write_with("ergodic_cdf_" + tag + ".csv",
                   [&](std::ostream& os) { write_cdf_csv(os, p.result.per_packet_latency); });
    art.write_with("ergodic_samples_" + tag + ".csv", [&](std::ostream& os) {
      write_outcome_dump(os, to_raw(p.result.events, 0));
    });
  }
  art.write_with("ergodic_summary.csv", [&](std::ostream& os) { write_csv(os, summary); });

  if (c.chart) {
    std::vector<Series> by_n;
    std::vector<std::pair<std::string, DeltaQ>> cdfs;
    for (int n : stations) {
      Series s{std::to_string(n) + " stations", {}, false};
      for (const SaturationPoint& p : points) {
        if (p.n_stations != n) continue;
        s.points.emplace_back(p.window, p.throughput_mbps);
        cdfs.emplace_back(std::to_string(n) + " sta, W=" + std::to_string(p.window),
                          p.result.per_packet_latency);
      }
      by_n.push_back(std::move(s));
    }
    art.write("ergodic_throughput.svg",
              line_chart_svg(by_n, {"Saturation throughput", "initial window", "Mbit/s"}));
    art.write("ergodic_cdf.svg",
              cdf_chart_svg(cdfs, {"Per-packet latency", "latency (us)", "CDF"}));
  }
  return kSuccess;
}

int cmd_transient(const ExperimentConfig& c, Artifacts& art) {
  const auto stations = stations_setting(c, "1..9");
  const std::size_t reps = count_setting(c, "reps", "10000");

  CsvTable summary{{"n_stations", "replications", "mean_tte_us", "p90_tte_us"}, {}};
  std::vector<std::pair<std::string, DeltaQ>> cdfs;
  for (int n : stations) {
    const TransientResult r =
        run_transient(c.params, n, reps, derive_seed(seed_of(c), {static_cast<std::uint64_t>(n)}),
                      StartMode::Synchronized, c.workers);
    const DeltaQ tte = r.tte();
    summary.rows.push_back({std::to_string(n), std::to_string(reps), num(r.mean_tte()),
                            num(tte.quantile(0.9).value)});
    art.write_with("transient_tte_n" + std::to_string(n) + ".csv",
                   [&](std::ostream& os) { write_tte_dump(os, r.time_to_empty); });
    art.write_with("transient_cdf_n" + std::to_string(n) + ".csv",
                   [&](std::ostream& os) { write_cdf_csv(os, tte); });
    cdfs.emplace_back(std::to_string(n) + " stations", tte);
  }
  art.write_with("transient_summary.csv", [&](std::ostream& os) { write_csv(os, summary); });
  if (c.chart) {
    art.write("transient_cdf.svg",
              cdf_chart_svg(cdfs, {"Time-to-empty", "time-to-empty (us)", "CDF"}));
  }
  return kSuccess;
}

int cmd_bound(const ExperimentConfig& c, Artifacts& art) {
  const auto stations = stations_setting(c, "1..7");
  const std::size_t reps = count_setting(c, "reps", "10000");
  int size = c.params.default_packet_size;
  if (c.has("aggregate")) size = static_cast<int>(parse_int(c.get("aggregate", "")));

  CsvTable table{{"n_stations", "packet_size_bytes", "mean_tte_us", "total_mbps",
                  "per_station_mbps"},
                 {}};
  Series total{"total", {}, false};
  Series per_station{"per station", {}, false};
  for (int n : stations) {
    const std::uint64_t s = derive_seed(seed_of(c), {static_cast<std::uint64_t>(n)});
    const ThroughputBound b = amsdu_bound(c.params, n, size, reps, s, c.workers);
    table.rows.push_back({std::to_string(n), std::to_string(size), num(b.mean_tte),
                          num(b.total_mbps), num(b.per_station_mbps)});
    total.points.emplace_back(n, b.total_mbps);
    per_station.points.emplace_back(n, b.per_station_mbps);
  }
  art.write_with("bound.csv", [&](std::ostream& os) { write_csv(os, table); });
  if (c.chart) {
    art.write("bound.svg", line_chart_svg({total, per_station},
                                          {"Throughput bound", "stations", "Mbit/s"}));
  }
  return kSuccess;
}

int cmd_rts_heatmap(const ExperimentConfig& c, Artifacts& art) {
  const auto stations = stations_setting(c, "1..10");
  const auto sizes = parse_size_range(c.get("sizes", "100:9900:100"));
  const std::size_t reps = count_setting(c, "reps", "10000");
  const auto cells = rts_heatmap(c.params, stations, sizes, reps, seed_of(c), c.workers);
  art.write_with("rts_heatmap.csv", [&](std::ostream& os) { write_heatmap_csv(os, cells); });
  if (c.chart) {
    art.write("rts_heatmap.svg",
              heatmap_svg(cells, {"Change in throughput bound from toggling RTS/CTS",
                                  "packet size (bytes)", "stations"}));
  }
  return kSuccess;
}

int cmd_tte_compare(const ExperimentConfig& c, Artifacts& art) {
  const auto stations = stations_setting(c, "5");
  const std::size_t reps = count_setting(c, "reps", "10000");
  CsvTable cdf{{"n_stations", "variant", "delay_us", "cdf"}, {}};
  CsvTable bounds{{"n_stations", "variant", "packet_size_bytes", "mean_tte_us",
                   "per_station_mbps"},
                  {}};
  std::vector<std::pair<std::string, DeltaQ>> curves;
  for (int n : stations) {
    const auto variants = tte_variants(
        c.params, n, reps, derive_seed(seed_of(c), {static_cast<std::uint64_t>(n)}),
        c.workers);
    for (const NamedTte& v : variants) {
      const DeltaQ tte = v.result.tte();
      double acc = 0.0;
      const auto atoms = tte.atoms();
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        acc += atoms[i].mass;
        cdf.rows.push_back({std::to_string(n), v.variant, num(atoms[i].delay),
                            num(i + 1 == atoms.size() ? tte.delivered_mass() : acc)});
      }
      bounds.rows.push_back({std::to_string(n), v.variant, std::to_string(v.packet_size),
                             num(v.bound.mean_tte), num(v.bound.per_station_mbps)});
      curves.emplace_back(v.variant + " (" + std::to_string(n) + ")", tte);
    }
  }
  art.write_with("tte_compare.csv", [&](std::ostream& os) { write_csv(os, cdf); });
  art.write_with("tte_compare_bounds.csv", [&](std::ostream& os) { write_csv(os, bounds); });
  if (c.chart) {
    art.write("tte_compare.svg",
              cdf_chart_svg(curves, {"Time-to-empty by feature", "time-to-empty (us)", "CDF"}));
  }
  return kSuccess;
}

int cmd_anomaly(const ExperimentConfig& c, Artifacts& art) {
  const auto stations = stations_setting(c, "5");
  const std::size_t reps = count_setting(c, "reps", "10000");
  const double slow = parse_double(c.get("slow_rate", "1"));
  const auto fast = parse_rate_list(c.get("fast_rates", "1,2,5.5,11,24,54,144"));

  CsvTable table{{"n_stations", "fast_rate_mbps", "station", "data_rate_mbps", "bound_mbps",
                  "mean_completion_us", "delivered_fraction"},
                 {}};
  std::vector<Series> series;
  for (int n : stations) {
    const auto rows = anomaly_experiment(
        c.params, n, slow, fast, reps,
        derive_seed(seed_of(c), {static_cast<std::uint64_t>(n)}), c.workers);
    Series s{std::to_string(n) + " stations", {}, false};
    for (const AnomalyRow& r : rows) {
      table.rows.push_back({std::to_string(n), num(r.fast_rate), std::to_string(r.station),
                            num(r.data_rate), num(r.bound_mbps), num(r.mean_completion),
                            num(r.delivered_fraction)});
      if (r.station == 0) s.points.emplace_back(r.fast_rate, r.bound_mbps);
    }
    series.push_back(std::move(s));
  }
  art.write_with("anomaly.csv", [&](std::ostream& os) { write_csv(os, table); });
  if (c.chart) {
    art.write("anomaly.svg",
              line_chart_svg(series, {"Per-station bound with one slow station",
                                      "fast station rate (Mbit/s)", "Mbit/s"}));
  }
  return kSuccess;
}

int cmd_convergence(const ExperimentConfig& c, Artifacts& art) {
  const auto stations = stations_setting(c, "5");
  const std::size_t runs = count_setting(c, "runs", "1000");
  std::vector<std::size_t> sizes;
  for (int s : parse_size_range(c.get("sizes", "1000:10000:1000"))) {
    if (s < 1) throw std::invalid_argument("sizes must be >= 1");
    sizes.push_back(static_cast<std::size_t>(s));
  }
  const double q = parse_double(c.get("quantile", "0.9"));
  const std::string mode_name = c.get("mode", "ergodic");
  EvaluationMode mode;
  if (mode_name == "ergodic") {
    mode = EvaluationMode::Ergodic;
  } else if (mode_name == "transient") {
    mode = EvaluationMode::Transient;
  } else {
    throw std::invalid_argument("mode must be ergodic or transient");
  }

  CsvTable raw{{"n_stations", "size", "run", "estimate_us"}, {}};
  CsvTable summary{{"n_stations", "size", "min", "q1", "median", "q3", "max", "iqr",
                    "undefined"},
                   {}};
  std::vector<Series> series;
  for (int n : stations) {
    const auto rows = convergence_study(
        c.params, n, mode, runs, sizes, q,
        derive_seed(seed_of(c), {static_cast<std::uint64_t>(n)}), c.workers);
    Series med{"median, " + std::to_string(n) + " sta", {}, false};
    Series lo{"q1", {}, false};
    Series hi{"q3", {}, false};
    for (const ConvergenceRow& row : rows) {
      for (std::size_t r = 0; r < row.estimates.size(); ++r) {
        raw.rows.push_back({std::to_string(n), std::to_string(row.size), std::to_string(r),
                            num(row.estimates[r])});
      }
      const SpreadSummary& s = row.spread;
      summary.rows.push_back({std::to_string(n), std::to_string(row.size), num(s.min),
                              num(s.q1), num(s.median), num(s.q3), num(s.max),
                              num(s.iqr()), std::to_string(row.undefined)});
      med.points.emplace_back(static_cast<double>(row.size), s.median);
      lo.points.emplace_back(static_cast<double>(row.size), s.q1);
      hi.points.emplace_back(static_cast<double>(row.size), s.q3);
    }
    series.insert(series.end(), {med, lo, hi});
  }
  art.write_with("convergence.csv", [&](std::ostream& os) { write_csv(os, raw); });
  art.write_with("convergence_summary.csv", [&](std::ostream& os) { write_csv(os, summary); });
  if (c.chart) {
    art.write("convergence.svg",
              line_chart_svg(series, {"Percentile estimate convergence", "sample size",
                                      "estimate (us)"}));
  }
  return kSuccess;
}

int cmd_oracle_check(const ExperimentConfig& c, Artifacts& art, std::ostream& out) {
  const auto stations = stations_setting(c, "1,2");
  const std::size_t reps = count_setting(c, "reps", "100000");
  const double threshold = parse_double(c.get("threshold", "0.01"));
  UnrollOptions options;
  options.node_budget = count_setting(c, "budget", "20000000");
  if (c.has("max_latency")) options.max_latency = parse_double(c.get("max_latency", ""));

  CsvTable table{{"n_stations", "replications", "exact_nodes", "tte_ks", "station_ks_max",
                  "mass_error", "threshold", "pass"},
                 {}};
  bool all_pass = true;
  for (int n : stations) {
    const ExactResult exact =
        unroll_synchronized(c.params, homogeneous_stations(c.params, n), options);
    const TransientResult mc =
        run_transient(c.params, n, reps, derive_seed(seed_of(c), {static_cast<std::uint64_t>(n)}),
                      StartMode::Synchronized, c.workers);
    const double tte_ks = ks_distance(exact.tte, mc.tte());
    double station_ks = 0.0;
    double mass_error = 0.0;
    for (int s = 0; s < n; ++s) {
      const DeltaQ& e = exact.per_station_latency[static_cast<std::size_t>(s)];
      station_ks = std::max(station_ks, ks_distance(e, mc.station_latency(s)));
      double delivered = 0.0;
      for (const Atom& a : e.atoms()) delivered += a.mass;
      mass_error = std::max(mass_error, std::abs(delivered + e.loss_mass() - 1.0));
    }
    const bool pass = tte_ks <= threshold && station_ks <= threshold && mass_error <= 1e-9;
    all_pass = all_pass && pass;
    table.rows.push_back({std::to_string(n), std::to_string(reps),
                          std::to_string(exact.nodes), num(tte_ks), num(station_ks),
                          num(mass_error), num(threshold), pass ? "true" : "false"});
    art.write_with("oracle_exact_cdf_n" + std::to_string(n) + ".csv",
                   [&](std::ostream& os) { write_cdf_csv(os, exact.tte); });
    art.write_with("oracle_mc_cdf_n" + std::to_string(n) + ".csv",
                   [&](std::ostream& os) { write_cdf_csv(os, mc.tte()); });
    out << "oracle-check n=" << n << " ks=" << num(tte_ks) << " station_ks=" << num(station_ks)
        << (pass ? " PASS" : " FAIL") << '\n';
  }
  art.write_with("oracle_check.csv", [&](std::ostream& os) { write_csv(os, table); });
  return all_pass ? kSuccess : kVerificationFailed;
}

}  // namespace

std::string ExperimentConfig::get(const std::string& key, const std::string& fallback) const {
  const auto it = settings.find(key);
  return it == settings.end() ? fallback : it->second;
}

const std::vector<std::string>& experiment_keys() {
  static const std::vector<std::string> keys{
      "preset",  "stations",  "reps",     "outcomes",   "seed",       "sizes",
      "out",     "runs",      "quantile", "mode",       "fast_rates", "window_exponents",
      "threshold", "aggregate", "budget", "max_latency", "slow_rate",  "workers",
      "chart"};
  return keys;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    std::string_view item = rest.substr(0, comma);
    rest.remove_prefix(comma == std::string_view::npos ? rest.size() : comma + 1);
    if (item.empty()) continue;
    if (const auto dots = item.find(".."); dots != std::string_view::npos) {
      const auto lo = parse_int(item.substr(0, dots));
      const auto hi = parse_int(item.substr(dots + 2));
      if (hi < lo) throw std::invalid_argument("empty range '" + std::string(item) + "'");
      for (auto v = lo; v <= hi; ++v) out.push_back(static_cast<int>(v));
    } else {
      out.push_back(static_cast<int>(parse_int(item)));
    }
  }
  if (out.empty()) throw std::invalid_argument("empty list '" + text + "'");
  return out;
}

std::vector<int> parse_size_range(const std::string& text) {
  if (text.find(':') == std::string::npos) return parse_int_list(text);
  std::vector<long long> parts;
  std::string_view rest = text;
  while (true) {
    const auto colon = rest.find(':');
    parts.push_back(parse_int(rest.substr(0, colon)));
    if (colon == std::string_view::npos) break;
    rest.remove_prefix(colon + 1);
  }
  if (parts.size() != 3 || parts[2] <= 0 || parts[1] < parts[0]) {
    throw std::invalid_argument("expected first:last:step, got '" + text + "'");
  }
  std::vector<int> out;
  for (long long v = parts[0]; v <= parts[1]; v += parts[2]) out.push_back(static_cast<int>(v));
  return out;
}

std::vector<double> parse_rate_list(const std::string& text) {
  std::vector<double> out;
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    if (!item.empty()) out.push_back(parse_double(item));
    rest.remove_prefix(comma == std::string_view::npos ? rest.size() : comma + 1);
  }
  if (out.empty()) throw std::invalid_argument("empty rate list");
  for (double r : out) {
    if (!(r > 0)) throw std::invalid_argument("rates must be positive");
  }
  return out;
}

ExperimentConfig resolve_config(const std::string& experiment,
                                const std::map<std::string, std::string>& flags,
                                const std::string& config_text,
                                const std::string& config_name) {
  ExperimentConfig c;
  c.experiment = experiment;
  const auto entries = parse_key_values(config_text, config_name);

  for (const KeyValue& kv : entries) {
    if (kv.key == "preset") c.preset = kv.value;
  }
  if (const auto it = flags.find("preset"); it != flags.end()) c.preset = it->second;
  c.params = preset(c.preset);
  if (experiment == "oracle-check") {
    // Full preset windows make the exact tree intractable beyond one station.
    c.params.cw_min_exponent = 2;
    c.params.max_retries = 2;
  }

  for (const KeyValue& kv : entries) {
    const std::string where = config_name + ":" + std::to_string(kv.line) + ": ";
    try {
      if (apply_param(c.params, kv.key, kv.value)) continue;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where + kv.key + ": " + e.what());
    }
    if (!is_experiment_key(kv.key)) throw ConfigError(where + "unknown key '" + kv.key + "'");
    if (kv.key != "preset") c.settings[kv.key] = kv.value;
  }

  for (const auto& [key, value] : flags) {
    if (key == "preset") continue;
    if (const auto p = param_flags().find(key); p != param_flags().end()) {
      // --rate names the slow station in the anomaly experiment.
      if (key == "rate" && experiment == "anomaly") {
        c.settings["slow_rate"] = value;
        continue;
      }
      if (!apply_param(c.params, p->second, value)) {
        throw std::logic_error("unmapped parameter flag " + key);
      }
      continue;
    }
    c.settings[key] = value;
  }
  c.params.validate();

  if (c.has("seed")) c.seed = static_cast<std::uint64_t>(parse_int(c.get("seed", "")));
  c.out_dir = c.get("out", ".");
  c.chart = c.has("chart") && parse_bool(c.get("chart", "false"));
  if (c.has("workers")) {
    const long long w = parse_int(c.get("workers", ""));
    if (w < 0) throw std::invalid_argument("workers must be >= 0");
    c.workers = static_cast<unsigned>(w);
  }
  return c;
}

int run_experiment(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  try {
    Artifacts art(config, out);
    const std::string& e = config.experiment;
    if (e == "ergodic") return cmd_ergodic(config, art);
    if (e == "transient") return cmd_transient(config, art);
    if (e == "bound") return cmd_bound(config, art);
    if (e == "rts-heatmap") return cmd_rts_heatmap(config, art);
    if (e == "tte-compare") return cmd_tte_compare(config, art);
    if (e == "anomaly") return cmd_anomaly(config, art);
    if (e == "convergence") return cmd_convergence(config, art);
    if (e == "oracle-check") return cmd_oracle_check(config, art, out);
    err << "unknown experiment '" << e << "'\n";
    return kUsage;
  } catch (const std::invalid_argument& ex) {
    err << "error: " << ex.what() << '\n';
    return kUsage;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kRuntime;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Latency, loss and throughput bounds for 802.11 DCF"};
  app.require_subcommand(1);

  std::map<std::string, std::string> flags;
  std::string config_path;

  const std::vector<std::pair<std::string, std::string>> subcommands{
      {"ergodic", "saturation latency, loss and throughput"},
      {"transient", "time-to-empty with synchronized start"},
      {"bound", "throughput bound from mean time-to-empty"},
      {"rts-heatmap", "bound change from enabling RTS/CTS"},
      {"tte-compare", "time-to-empty for baseline, RTS/CTS and A-MSDU"},
      {"anomaly", "per-station bounds with one slow station"},
      {"convergence", "spread of percentile estimates vs sample size"},
      {"oracle-check", "exact unrolling vs Monte Carlo"},
  };
  const std::vector<std::tuple<std::string, std::string, std::string>> valued{
      {"--preset", "preset", "parameter preset (bianchi-802.11b, baseline-802.11n)"},
      {"--stations", "stations", "station counts, e.g. 1..9 or 1,2,5"},
      {"--reps", "reps", "replications per configuration"},
      {"--outcomes", "outcomes", "packet outcomes per ergodic run"},
      {"--seed", "seed", "master seed"},
      {"--out", "out", "output directory"},
      {"--packet-size", "packet_size", "packet size in bytes"},
      {"--rate", "rate", "data rate in Mbit/s (slow station for anomaly)"},
      {"--sizes", "sizes", "first:last:step or a list"},
      {"--workers", "workers", "worker threads, 0 = all cores"},
      {"--window-exponents", "window_exponents", "initial window exponents (ergodic)"},
      {"--fast-rates", "fast_rates", "rates of the other stations (anomaly)"},
      {"--runs", "runs", "independent runs per size (convergence)"},
      {"--quantile", "quantile", "percentile level (convergence)"},
      {"--mode", "mode", "ergodic or transient (convergence)"},
      {"--threshold", "threshold", "KS distance limit (oracle-check)"},
      {"--aggregate", "aggregate", "A-MSDU aggregate size in bytes (bound)"},
      {"--budget", "budget", "node budget for exact unrolling (oracle-check)"},
      {"--max-latency", "max_latency", "latency cutoff in us (oracle-check)"},
  };

  std::string chosen;
  for (const auto& [name, help] : subcommands) {
    CLI::App* sc = app.add_subcommand(name, help);
    sc->callback([&chosen, n = name] { chosen = n; });
    sc->add_option("--config", config_path, "flat key = value config file");
    for (const auto& [flag, key, text] : valued) {
      sc->add_option_function<std::string>(
          flag, [&flags, k = key](const std::string& v) { flags[k] = v; }, text);
    }
    sc->add_flag_callback("--chart", [&flags] { flags["chart"] = "true"; },
                          "also write SVG charts");
    sc->add_flag_callback("--rts-cts", [&flags] { flags["rts_cts"] = "true"; },
                          "enable the RTS/CTS handshake");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o;
    std::ostringstream x;
    const int code = app.exit(e, o, x);
    out << o.str();
    err << x.str();
    return code == 0 ? kSuccess : kUsage;
  }

  ExperimentConfig config;
  try {
    std::string text;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw ConfigError(config_path + ": cannot open");
      std::ostringstream buf;
      buf << f.rdbuf();
      text = buf.str();
    }
    config = resolve_config(chosen, flags, text, config_path.empty() ? "<none>" : config_path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  if (!config.seed) {
    config.seed = (static_cast<std::uint64_t>(std::random_device{}()) << 32) |
                  std::random_device{}();
    out << "seed: " << *config.seed << '\n';
  }
  return run_experiment(config, out, err);
}

}  // namespace dqwifi::cli
