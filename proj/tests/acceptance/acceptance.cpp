// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Sample sizes are the pinned ones; seeds are fixed.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dqwifi/analysis.hpp"
#include "dqwifi/cli.hpp"
#include "dqwifi/deltaq.hpp"
#include "dqwifi/lts_exact.hpp"
#include "dqwifi/mc_engine.hpp"
#include "dqwifi/parallel.hpp"
#include "dqwifi/params_io.hpp"

using namespace dqwifi;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------- A1
Verdict oracle_equivalence() {
  WifiParams p = bianchi_80211b();
  p.cw_min_exponent = 2;
  p.max_retries = 2;
  Verdict v{true, ""};
  for (int n : {1, 2}) {
    const ExactResult exact = unroll_synchronized(p, homogeneous_stations(p, n));
    const TransientResult mc = run_transient(p, n, 100000, derive_seed(2024, {1, static_cast<std::uint64_t>(n)}));
    const double ks = ks_distance(exact.tte, mc.tte());
    v.pass = v.pass && ks <= 0.01;
    v.detail += "n=" + std::to_string(n) + " ks=" + fmt("%.4f", ks) + " ";
  }
  v.detail += "(limit 0.01, 1e5 reps)";
  return v;
}

// ---------------------------------------------------------------- A2
// Dyadic masses and integer delays keep every sum exact, so the algebraic
// laws can be asserted with ==.
DeltaQ dyadic(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 5), delay(0, 30), units(1, 4);
  std::vector<Atom> atoms(static_cast<std::size_t>(count(rng)));
  for (Atom& a : atoms) {
    a.delay = 50.0 * delay(rng);
    a.mass = units(rng) / 32.0;
  }
  return DeltaQ::from_atoms(atoms);
}

bool same(const DeltaQ& a, const DeltaQ& b) {
  return a.atoms() == b.atoms() && a.delivered_mass() == b.delivered_mass();
}

Verdict algebra_suite() {
  std::mt19937_64 rng(7);
  int checks = 0, failures = 0;
  auto expect = [&](bool ok) {
    ++checks;
    if (!ok) ++failures;
  };
  const DeltaQ zero = DeltaQ::point_mass(0);
  for (int i = 0; i < 500; ++i) {
    const DeltaQ a = dyadic(rng), b = dyadic(rng), c = dyadic(rng);
    expect(same(convolve(a, zero), a));
    expect(same(convolve(zero, a), a));
    expect(same(convolve(a, b), convolve(b, a)));
    expect(same(convolve(convolve(a, b), c), convolve(a, convolve(b, c))));
    expect(convolve(a, b).delivered_mass() == a.delivered_mass() * b.delivered_mass());
    const double w = (1 + i % 7) / 8.0;
    const std::vector<std::pair<double, DeltaQ>> parts{{w, a}, {1 - w, b}};
    const DeltaQ m = mixture(parts);
    expect(m.delivered_mass() == w * a.delivered_mass() + (1 - w) * b.delivered_mass());
    for (const Atom& at : m.atoms()) {
      expect(m.cdf(at.delay) == w * a.cdf(at.delay) + (1 - w) * b.cdf(at.delay));
    }
  }
  return {failures == 0, std::to_string(checks - failures) + "/" + std::to_string(checks) +
                             " exact assertions hold"};
}

// ---------------------------------------------------------------- A3
Verdict single_station() {
  const WifiParams p = bianchi_80211b();
  const Station s = homogeneous_stations(p, 1).front();
  const double expected = 128 + 7.5 * 50 + t_success(p, s);
  const double mean = run_ergodic(p, 1, 100000, 31).per_packet_latency.mean_delivered();
  const double rel = std::abs(mean - expected) / expected;

  std::set<double> want;
  for (int b = 0; b < 16; ++b) want.insert(p.difs + b * p.slot_time + t_success(p, s));
  const TransientResult t = run_transient(p, 1, 100000, 32);
  const std::set<double> got(t.time_to_empty.begin(), t.time_to_empty.end());

  return {rel <= 0.01 && got == want,
          "mean " + fmt("%.1f", mean) + " us vs " + fmt("%.1f", expected) + " (" +
              fmt("%.3f", 100 * rel) + "%, limit 1%); support " +
              std::to_string(got.size()) + " values, " + (got == want ? "exact" : "MISMATCH")};
}

// ---------------------------------------------------------------- A4
Verdict rts_crossover() {
  std::vector<int> sizes;
  for (int s = 100; s <= 1500; s += 100) sizes.push_back(s);
  const auto cells = rts_heatmap(bianchi_80211b(), {5}, sizes, 10000, 44);
  const int first = first_positive_size(cells, 5);
  std::string trace;
  for (const HeatmapCell& c : cells) {
    if (c.packet_size >= 400 && c.packet_size <= 800) {
      trace += std::to_string(c.packet_size) + ":" + fmt("%+.2f", c.percent_change) + "% ";
    }
  }
  return {first >= 500 && first <= 700,
          "first positive size " + std::to_string(first) + " B (window [500, 700]); " + trace};
}

// ---------------------------------------------------------------- A5
Verdict anomaly() {
  const WifiParams p = baseline_80211n();
  const auto rows = anomaly_experiment(p, 5, 1.0, {2, 5.5, 11, 24, 54, 144}, 10000, 55);
  bool below = true, close = true;
  double hi = 0;
  std::map<double, std::pair<double, double>> range;
  for (const AnomalyRow& r : rows) {
    below = below && r.bound_mbps < 1.0;
    hi = std::max(hi, r.bound_mbps);
    auto [it, fresh] = range.try_emplace(r.fast_rate, r.bound_mbps, r.bound_mbps);
    it->second.first = std::min(it->second.first, r.bound_mbps);
    it->second.second = std::max(it->second.second, r.bound_mbps);
  }
  double spread = 0;
  for (const auto& [rate, mm] : range) {
    spread = std::max(spread, (mm.second - mm.first) / mm.second);
    close = close && mm.second <= 1.1 * mm.first;
  }
  return {below && close, "max per-station bound " + fmt("%.3f", hi) +
                              " Mbit/s (< 1); max spread within a rate " +
                              fmt("%.1f", 100 * spread) + "% (<= 10%)"};
}

// ---------------------------------------------------------------- A6
Verdict bianchi_shape() {
  const std::vector<int> exps{3, 4, 5, 6, 7, 8, 9, 10};
  const auto pts = saturation_sweep(bianchi_80211b(), {5, 50}, exps, 100000, 66);
  std::vector<double> five, fifty, fifty_eq2;
  for (const SaturationPoint& s : pts) {
    (s.n_stations == 5 ? five : fifty).push_back(s.elapsed_mbps);
    if (s.n_stations == 50) fifty_eq2.push_back(s.throughput_mbps);
  }
  bool increasing = true;
  for (std::size_t i = 1; i < fifty.size(); ++i) increasing = increasing && fifty[i] > fifty[i - 1];
  const auto peak = static_cast<std::size_t>(std::max_element(five.begin(), five.end()) - five.begin());
  const bool interior = peak > 0 && peak + 1 < five.size();

  std::string d = "n=50:";
  for (double v : fifty) d += " " + fmt("%.3f", v);
  d += (increasing ? " (strictly increasing)" : " (NOT increasing)");
  d += "; n=5 peak at W=" + std::to_string(1 << exps[peak]) +
       (interior ? " (interior)" : " (edge)");
  d += "; inverse-mean-latency route n=50:";
  for (double v : fifty_eq2) d += " " + fmt("%.3f", v);
  return {increasing && interior, d};
}

// ---------------------------------------------------------------- A7
Verdict saturation_severity() {
  WifiParams p = bianchi_80211b();
  p.cw_min_exponent = 3;
  const SaturationPoint few = saturation_point(p, 5, 100000, 71);
  const SaturationPoint many = saturation_point(p, 50, 100000, 72);
  // Loss counts as unbounded delay: an undefined 90th percentile means more
  // than a tenth of packets never arrive.
  const double p90_many = std::isnan(many.p90_latency) ? INFINITY : many.p90_latency;
  const auto delivered = many.result.per_packet_latency.samples();
  const double cond =
      DeltaQ::from_samples({delivered.begin(), delivered.end()}, 0).quantile(0.9).value;
  const bool pass = many.loss_fraction > 0 && p90_many > 10 * few.p90_latency;
  return {pass, "loss " + fmt("%.4f", many.loss_fraction) + "; p90 50 stations " +
                    (std::isinf(p90_many) ? std::string("undefined (loss > 10%)")
                                          : fmt("%.0f", p90_many) + " us") +
                    " vs 5 stations " + fmt("%.0f", few.p90_latency) +
                    " us; p90 of delivered only " + fmt("%.0f", cond) + " us (" +
                    fmt("%.1f", cond / few.p90_latency) + "x)"};
}

// ---------------------------------------------------------------- A8
Verdict convergence() {
  std::vector<std::size_t> sizes;
  for (std::size_t k = 1; k <= 10; ++k) sizes.push_back(k * 1000);
  const auto rows = convergence_study(bianchi_80211b(), 5, EvaluationMode::Ergodic, 100, sizes,
                                      0.9, 88);
  const double small = rows.front().spread.iqr();
  const double large = rows.back().spread.iqr();
  return {large < small, "IQR of p90 estimate: " + fmt("%.0f", small) + " us at 1e3, " +
                             fmt("%.0f", large) + " us at 1e4 (100 runs)"};
}

// ---------------------------------------------------------------- A9
Verdict monotone_bounds() {
  const WifiParams b = bianchi_80211b();
  const WifiParams n = baseline_80211n();
  bool tte_ok = true, bound_ok = true, amsdu_ok = true;
  double prev_tte = 0, prev_bound = INFINITY;
  std::string d = "mean TTE (ms):";
  for (int k = 1; k <= 9; ++k) {
    const TransientResult r = run_transient(b, k, 10000, derive_seed(99, {static_cast<std::uint64_t>(k)}));
    const ThroughputBound bound = bound_from_tte(r, b.default_packet_size);
    tte_ok = tte_ok && r.mean_tte() >= prev_tte;
    bound_ok = bound_ok && bound.per_station_mbps <= prev_bound;
    prev_tte = r.mean_tte();
    prev_bound = bound.per_station_mbps;
    d += " " + fmt("%.1f", r.mean_tte() / 1000);

    const std::uint64_t s = derive_seed(199, {static_cast<std::uint64_t>(k)});
    const double big = amsdu_bound(n, k, 7935, 10000, s).total_mbps;
    const double small = amsdu_bound(n, k, 1023, 10000, s).total_mbps;
    amsdu_ok = amsdu_ok && big > small;
  }
  d += std::string("; TTE ") + (tte_ok ? "non-decreasing" : "DECREASES") + ", per-station bound " +
       (bound_ok ? "non-increasing" : "INCREASES") + ", A-MSDU 7935 > 1023 " +
       (amsdu_ok ? "for n=1..9" : "FAILS");
  return {tte_ok && bound_ok && amsdu_ok, d};
}

// ---------------------------------------------------------------- A10
std::map<std::string, std::string> run_cli(std::vector<std::string> args, const fs::path& dir) {
  fs::remove_all(dir);
  args.insert(args.begin(), "dqwifi");
  args.push_back("--out");
  args.push_back(dir.string());
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  if (cli::run(static_cast<int>(argv.size()), argv.data(), out, err) != 0) {
    throw std::runtime_error("cli failed: " + err.str());
  }
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() != ".csv") continue;
    std::ifstream f(e.path(), std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    files[e.path().filename().string()] = s.str();
  }
  return files;
}

Verdict determinism() {
  const std::vector<std::vector<std::string>> experiments{
      {"ergodic", "--stations", "5,20", "--window-exponents", "3,4", "--outcomes", "5000"},
      {"transient", "--stations", "1..6", "--reps", "2000"},
      {"bound", "--stations", "1..4", "--reps", "1000"},
      {"rts-heatmap", "--stations", "3,5", "--sizes", "300:900:200", "--reps", "500"},
      {"tte-compare", "--preset", "baseline-802.11n", "--stations", "4", "--reps", "1000"},
      {"anomaly", "--preset", "baseline-802.11n", "--stations", "4", "--reps", "1000"},
      {"convergence", "--stations", "3", "--runs", "8", "--sizes", "500,1000"},
      {"oracle-check", "--reps", "5000", "--threshold", "0.05"},
  };
  const fs::path root = fs::temp_directory_path() / "dqwifi_acceptance";
  std::size_t files = 0;
  bool ok = true;
  for (const auto& e : experiments) {
    std::vector<std::map<std::string, std::string>> outs;
    for (const char* w : {"1", "1", "4"}) {
      std::vector<std::string> args = e;
      args.insert(args.end(), {"--seed", "12345", "--workers", w});
      outs.push_back(run_cli(args, root / (e[0] + "_" + std::to_string(outs.size()))));
    }
    ok = ok && !outs[0].empty() && outs[0] == outs[1] && outs[0] == outs[2];
    files += outs[0].size();
  }
  fs::remove_all(root);
  return {ok, std::to_string(experiments.size()) + " experiments, " + std::to_string(files) +
                  " CSV files identical across reruns and 1 vs 4 workers"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"A1 oracle equivalence", oracle_equivalence},
      {"A2 delta-Q algebra", algebra_suite},
      {"A3 single-station closed form", single_station},
      {"A4 RTS/CTS crossover", rts_crossover},
      {"A5 performance anomaly", anomaly},
      {"A6 saturation throughput shape", bianchi_shape},
      {"A7 saturation latency severity", saturation_severity},
      {"A8 percentile convergence", convergence},
      {"A9 monotonicity and bounds", monotone_bounds},
      {"A10 determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
