#pragma once

// Named parameter presets and the flat `key = value` config format.

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dqwifi/dcf_model.hpp"

namespace dqwifi {

/// Parse or validation failure carrying a `source:line:` prefix.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 802.11b DSSS timings at 1 Mbit/s, as used for the saturation-throughput
/// comparison.
WifiParams bianchi_80211b();

/// 802.11n defaults: 9 us slots, 24 us PHY header, basic rate set
/// {1, 2, 5.5, 11, 24}, data frames at 144 Mbit/s, A-MSDU cap 7935 bytes.
WifiParams baseline_80211n();

/// Looks a preset up by name ("bianchi-802.11b" or "baseline-802.11n").
WifiParams preset(std::string_view name);
std::vector<std::string> preset_names();

struct KeyValue {
  std::string key;
  std::string value;
  int line = 0;
};

/// Splits `key = value` lines. `#` starts a comment; blank lines are
/// skipped; duplicate keys are an error.
std::vector<KeyValue> parse_key_values(std::string_view text,
                                       std::string_view source);

/// Sets one WifiParams field by its name. Returns false for an unknown key;
/// throws std::invalid_argument for a malformed value.
bool apply_param(WifiParams& params, std::string_view key, std::string_view value);

/// Every field as `key = value` lines, parseable by parse_key_values.
std::string format_params(const WifiParams& params);

double parse_double(std::string_view text);
long long parse_int(std::string_view text);
bool parse_bool(std::string_view text);

/// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace dqwifi
