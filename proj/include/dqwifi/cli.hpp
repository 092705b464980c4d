#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dqwifi/dcf_model.hpp"

namespace dqwifi::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kRuntime = 2,
  kVerificationFailed = 3,
};

/// Resolved settings for one invocation. Command-line flags win over config
/// file entries, which win over defaults.
struct ExperimentConfig {
  std::string experiment;
  std::string preset = "bianchi-802.11b";
  WifiParams params;
  std::map<std::string, std::string> settings;  // experiment knobs, raw text
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  bool chart = false;
  unsigned workers = 0;

  bool has(const std::string& key) const { return settings.count(key) != 0; }
  std::string get(const std::string& key, const std::string& fallback) const;
};

/// Experiment keys accepted in a config file besides WifiParams fields.
const std::vector<std::string>& experiment_keys();

/// Builds the config from a preset, an optional config file's text and
/// flag values. Unknown config keys are rejected with their line number.
ExperimentConfig resolve_config(const std::string& experiment,
                                const std::map<std::string, std::string>& flags,
                                const std::string& config_text,
                                const std::string& config_name);

/// "1..9", "1,2,5" or a mix such as "1..3,7".
std::vector<int> parse_int_list(const std::string& text);
/// "100:9900:100" (inclusive) or a comma list.
std::vector<int> parse_size_range(const std::string& text);
std::vector<double> parse_rate_list(const std::string& text);

/// Runs one subcommand with already-resolved settings; returns an exit code.
int run_experiment(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// Full command line entry point.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dqwifi::cli
