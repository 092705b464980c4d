#include "dqwifi/params_io.hpp"

#include <charconv>
#include <limits>
#include <set>
#include <sstream>

namespace dqwifi {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

int parse_narrow_int(std::string_view text) {
  const long long v = parse_int(text);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw std::invalid_argument("integer out of range: " + std::string(text));
  }
  return static_cast<int>(v);
}

std::vector<double> parse_double_list(std::string_view text) {
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = trim(text.substr(0, comma));
    if (!item.empty()) out.push_back(parse_double(item));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

WifiParams bianchi_80211b() {
  WifiParams p;
  p.slot_time = 50;
  p.sifs = 28;
  p.difs = 128;
  p.phy_header = 128;  // 128 bits at 1 Mbit/s
  p.mac_header_bits = 272;
  p.base_rate = 1;
  p.data_rate = 1;
  p.cw_min_exponent = 4;
  p.cw_max = 1023;
  p.max_retries = 6;
  p.default_packet_size = 1023;
  return p;
}

WifiParams baseline_80211n() {
  WifiParams p;
  p.slot_time = 9;
  p.sifs = 10;
  p.difs = 28;
  p.phy_header = 24;
  p.mac_header_bits = 272;
  p.base_rate = 1;
  p.basic_rates = {1, 2, 5.5, 11, 24};
  p.data_rate = 144;
  p.cw_min_exponent = 4;
  p.cw_max = 1023;
  p.max_retries = 6;
  p.default_packet_size = 1023;
  p.max_aggregate_bytes = 7935;
  return p;
}

WifiParams preset(std::string_view name) {
  if (name == "bianchi-802.11b") return bianchi_80211b();
  if (name == "baseline-802.11n") return baseline_80211n();
  throw std::invalid_argument("unknown preset '" + std::string(name) +
                              "' (known: bianchi-802.11b, baseline-802.11n)");
}

std::vector<std::string> preset_names() {
  return {"bianchi-802.11b", "baseline-802.11n"};
}

double parse_double(std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return v;
}

long long parse_int(std::string_view text) {
  text = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  }
  return v;
}

bool parse_bool(std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw std::invalid_argument("not a boolean: '" + std::string(text) + "'");
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<KeyValue> parse_key_values(std::string_view text,
                                       std::string_view source) {
  std::vector<KeyValue> out;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto where = std::string(source) + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(where + "expected 'key = value'");
    }
    KeyValue kv{std::string(trim(line.substr(0, eq))),
                std::string(trim(line.substr(eq + 1))), line_no};
    if (kv.key.empty()) throw ConfigError(where + "missing key");
    if (!seen.insert(kv.key).second) {
      throw ConfigError(where + "duplicate key '" + kv.key + "'");
    }
    out.push_back(std::move(kv));
  }
  return out;
}

bool apply_param(WifiParams& p, std::string_view key, std::string_view value) {
  if (key == "slot_time") p.slot_time = parse_double(value);
  else if (key == "sifs") p.sifs = parse_double(value);
  else if (key == "difs") p.difs = parse_double(value);
  else if (key == "phy_header") p.phy_header = parse_double(value);
  else if (key == "mac_header_bits") p.mac_header_bits = parse_double(value);
  else if (key == "base_rate") p.base_rate = parse_double(value);
  else if (key == "basic_rates") p.basic_rates = parse_double_list(value);
  else if (key == "data_rate") p.data_rate = parse_double(value);
  else if (key == "cw_min_exponent") p.cw_min_exponent = parse_narrow_int(value);
  else if (key == "cw_max") p.cw_max = parse_narrow_int(value);
  else if (key == "max_retries") p.max_retries = parse_narrow_int(value);
  else if (key == "default_packet_size") p.default_packet_size = parse_narrow_int(value);
  else if (key == "rts_cts_enabled") p.rts_cts_enabled = parse_bool(value);
  else if (key == "rts_bytes") p.rts_bytes = parse_narrow_int(value);
  else if (key == "cts_bytes") p.cts_bytes = parse_narrow_int(value);
  else if (key == "ack_bytes") p.ack_bytes = parse_narrow_int(value);
  else if (key == "max_aggregate_bytes") p.max_aggregate_bytes = parse_narrow_int(value);
  else return false;
  return true;
}

std::string format_params(const WifiParams& p) {
  std::ostringstream os;
  auto line = [&os](std::string_view k, const std::string& v) {
    os << k << " = " << v << '\n';
  };
  line("slot_time", format_double(p.slot_time));
  line("sifs", format_double(p.sifs));
  line("difs", format_double(p.difs));
  line("phy_header", format_double(p.phy_header));
  line("mac_header_bits", format_double(p.mac_header_bits));
  line("base_rate", format_double(p.base_rate));
  std::string rates;
  for (std::size_t i = 0; i < p.basic_rates.size(); ++i) {
    if (i) rates += ",";
    rates += format_double(p.basic_rates[i]);
  }
  line("basic_rates", rates);
  line("data_rate", format_double(p.data_rate));
  line("cw_min_exponent", std::to_string(p.cw_min_exponent));
  line("cw_max", std::to_string(p.cw_max));
  line("max_retries", std::to_string(p.max_retries));
  line("default_packet_size", std::to_string(p.default_packet_size));
  line("rts_cts_enabled", p.rts_cts_enabled ? "true" : "false");
  line("rts_bytes", std::to_string(p.rts_bytes));
  line("cts_bytes", std::to_string(p.cts_bytes));
  line("ack_bytes", std::to_string(p.ack_bytes));
  line("max_aggregate_bytes", std::to_string(p.max_aggregate_bytes));
  return os.str();
}

}  // namespace dqwifi
