#include "hbc/config.hpp"

#include <algorithm>
#include <cmath>

#include "hbc/error.hpp"
#include "hbc/records.hpp"

namespace hbc::config {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw Error(Errc::InvalidConfig, path + ": " + msg);
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<std::string_view> known) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) fail(path + "." + key, "unknown key");
  }
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "must be finite");
  return v;
}

std::int64_t integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<std::int64_t>();
}

void read_number(const json& obj, std::string_view key, const std::string& path, double& out) {
  if (auto it = obj.find(key); it != obj.end()) out = number(*it, path + "." + std::string(key));
}

channel::ChannelParams parse_params(const json& j) {
  require_object(j, "params");
  channel::ChannelParams p;
  for (const auto& [key, value] : j.items()) {
    const auto field = channel::find_param(key);
    if (!field) fail("params." + key, "unknown key");
    p.*(field->member) = number(value, "params." + key);
  }
  return p;
}

frontend::TxModel parse_tx(const json& j) {
  require_object(j, "tx");
  reject_unknown(j, "tx", {"rail_v", "carrier_hz", "ref_load_ohm"});
  frontend::TxModel tx;
  read_number(j, "rail_v", "tx", tx.rail_v);
  read_number(j, "carrier_hz", "tx", tx.carrier_hz);
  read_number(j, "ref_load_ohm", "tx", tx.ref_load_ohm);
  return tx;
}

frontend::RxFrontendModel parse_rx(const json& j, bool& r_in_given) {
  require_object(j, "rx");
  reject_unknown(j, "rx", {"f_low_hz", "f_high_hz", "det_slope_v_per_db", "det_intercept_dbm",
                           "dynamic_range_db", "adc_bits", "adc_vref", "r_in"});
  frontend::RxFrontendModel rx;
  read_number(j, "f_low_hz", "rx", rx.f_low_hz);
  read_number(j, "f_high_hz", "rx", rx.f_high_hz);
  read_number(j, "det_slope_v_per_db", "rx", rx.det_slope_v_per_db);
  read_number(j, "det_intercept_dbm", "rx", rx.det_intercept_dbm);
  read_number(j, "dynamic_range_db", "rx", rx.dynamic_range_db);
  read_number(j, "adc_vref", "rx", rx.adc_vref);
  read_number(j, "r_in", "rx", rx.r_in);
  r_in_given = j.contains("r_in");
  if (auto it = j.find("adc_bits"); it != j.end()) {
    const auto bits = integer(*it, "rx.adc_bits");
    if (bits < 2 || bits > 16) fail("rx.adc_bits", "must lie in [2, 16]");
    rx.adc_bits = static_cast<int>(bits);
  }
  return rx;
}

campaign::SweepConfig parse_sweep(const json& j) {
  require_object(j, "sweep");
  reject_unknown(j, "sweep", {"f_start_hz", "f_stop_hz", "points", "spacing", "dither"});
  campaign::SweepConfig s;
  read_number(j, "f_start_hz", "sweep", s.f_start_hz);
  read_number(j, "f_stop_hz", "sweep", s.f_stop_hz);
  if (auto it = j.find("points"); it != j.end()) {
    const auto n = integer(*it, "sweep.points");
    if (n < 2 || n > 1'000'000) fail("sweep.points", "must lie in [2, 1000000]");
    s.points = static_cast<int>(n);
  }
  if (auto it = j.find("spacing"); it != j.end()) {
    if (*it == "linear") {
      s.spacing = campaign::Spacing::Linear;
    } else if (*it == "log") {
      s.spacing = campaign::Spacing::Log;
    } else {
      fail("sweep.spacing", "expected \"linear\" or \"log\"");
    }
  }
  if (auto it = j.find("dither"); it != j.end()) {
    if (!it->is_boolean()) fail("sweep.dither", "expected a boolean");
    s.dither = it->get<bool>();
  }
  return s;
}

std::vector<channel::Scenario> parse_scenarios(const json& j) {
  if (!j.is_array()) fail("scenarios", "expected an array");
  std::vector<channel::Scenario> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto path = "scenarios[" + std::to_string(i) + "]";
    const auto& item = j[i];
    require_object(item, path);
    reject_unknown(item, path, {"daq", "distance_cm"});
    if (!item.contains("daq") || !item.contains("distance_cm")) fail(path, "requires 'daq' and 'distance_cm'");
    if (!item["daq"].is_string()) fail(path + ".daq", "expected a string");
    channel::Scenario s;
    const auto mode = item["daq"].get<std::string>();
    if (mode == "classical") {
      s.daq_mode = channel::DaqMode::Classical;
    } else if (mode == "wireless") {
      s.daq_mode = channel::DaqMode::Wireless;
    } else {
      fail(path + ".daq", "expected \"classical\" or \"wireless\"");
    }
    s.distance_cm = number(item["distance_cm"], path + ".distance_cm");
    if (!(s.distance_cm > 0)) fail(path + ".distance_cm", "must be > 0");
    out.push_back(s);
  }
  return out;
}

campaign::SafetyPolicy parse_safety(const json& j) {
  require_object(j, "safety");
  reject_unknown(j, "safety", {"max_tx_dbm"});
  campaign::SafetyPolicy p;
  read_number(j, "max_tx_dbm", "safety", p.max_tx_dbm);
  return p;
}

FitOptions parse_fit(const json& j) {
  require_object(j, "fit");
  reject_unknown(j, "fit", {"free", "bounds_log10", "budget", "seed"});
  FitOptions f;
  if (auto it = j.find("free"); it != j.end()) {
    if (!it->is_array()) fail("fit.free", "expected an array of parameter names");
    for (const auto& name : *it) {
      if (!name.is_string() || !channel::find_param(name.get<std::string>())) {
        fail("fit.free", "unknown parameter " + name.dump());
      }
      f.free.push_back(name.get<std::string>());
    }
  }
  if (auto it = j.find("bounds_log10"); it != j.end()) {
    require_object(*it, "fit.bounds_log10");
    for (const auto& [key, value] : it->items()) {
      const auto path = "fit.bounds_log10." + key;
      if (!channel::find_param(key)) fail(path, "unknown parameter");
      if (!value.is_array() || value.size() != 2) fail(path, "expected [lower, upper]");
      const double lo = number(value[0], path);
      const double hi = number(value[1], path);
      if (!(lo < hi)) fail(path, "lower must be < upper");
      f.bounds_log10[key] = {lo, hi};
    }
  }
  if (auto it = j.find("budget"); it != j.end()) {
    const auto b = integer(*it, "fit.budget");
    if (b < 0 || b > 100'000'000) fail("fit.budget", "must be >= 0");
    f.budget = static_cast<int>(b);
  }
  if (auto it = j.find("seed"); it != j.end()) {
    if (!it->is_number_unsigned()) fail("fit.seed", "expected a non-negative integer");
    f.seed = it->get<std::uint64_t>();
  }
  return f;
}

}  // namespace

std::vector<channel::Scenario> canonical_scenarios() {
  std::vector<channel::Scenario> out;
  for (auto mode : {channel::DaqMode::Classical, channel::DaqMode::Wireless}) {
    for (double d : {10.0, 30.0, 50.0}) out.push_back({mode, d});
  }
  return out;
}

Config parse_config(const json& doc) {
  require_object(doc, "config");
  reject_unknown(doc, "config", {"params", "tx", "rx", "sweep", "scenarios", "safety", "fit"});

  Config cfg;
  auto& c = cfg.campaign;
  c.scenarios = canonical_scenarios();
  if (doc.contains("params")) c.params = parse_params(doc["params"]);
  if (doc.contains("tx")) c.tx = parse_tx(doc["tx"]);
  bool rx_r_in_given = false;
  if (doc.contains("rx")) c.rx = parse_rx(doc["rx"], rx_r_in_given);
  if (!rx_r_in_given) {
    c.rx.r_in = c.params.r_in;
  } else if (doc.contains("params") && doc["params"].contains("r_in") && c.rx.r_in != c.params.r_in) {
    fail("rx.r_in", "disagrees with params.r_in");
  } else {
    c.params.r_in = c.rx.r_in;
  }
  if (doc.contains("sweep")) c.sweep = parse_sweep(doc["sweep"]);
  if (doc.contains("scenarios")) c.scenarios = parse_scenarios(doc["scenarios"]);
  if (doc.contains("safety")) c.safety = parse_safety(doc["safety"]);
  if (doc.contains("fit")) cfg.fit = parse_fit(doc["fit"]);

  try {
    c.params.validate();
    c.tx.validate();
    c.rx.validate();
    c.sweep.validate();
  } catch (const Error& e) {
    fail("config", e.what());
  }
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  const auto text = records::read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::InvalidConfig, path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

json params_to_json(const channel::ChannelParams& p) {
  json j = json::object();
  for (const auto& f : channel::kParamFields) j[std::string(f.name)] = p.*f.member;
  return j;
}

json to_json(const campaign::CampaignInputs& in) {
  json scenarios = json::array();
  for (const auto& s : in.scenarios) {
    scenarios.push_back({{"daq", channel::to_string(s.daq_mode)}, {"distance_cm", s.distance_cm}});
  }
  return {
      {"params", params_to_json(in.params)},
      {"tx",
       {{"rail_v", in.tx.rail_v}, {"carrier_hz", in.tx.carrier_hz}, {"ref_load_ohm", in.tx.ref_load_ohm}}},
      {"rx",
       {{"f_low_hz", in.rx.f_low_hz},
        {"f_high_hz", in.rx.f_high_hz},
        {"det_slope_v_per_db", in.rx.det_slope_v_per_db},
        {"det_intercept_dbm", in.rx.det_intercept_dbm},
        {"dynamic_range_db", in.rx.dynamic_range_db},
        {"adc_bits", in.rx.adc_bits},
        {"adc_vref", in.rx.adc_vref},
        {"r_in", in.rx.r_in}}},
      {"sweep",
       {{"f_start_hz", in.sweep.f_start_hz},
        {"f_stop_hz", in.sweep.f_stop_hz},
        {"points", in.sweep.points},
        {"spacing", in.sweep.spacing == campaign::Spacing::Linear ? "linear" : "log"},
        {"dither", in.sweep.dither}}},
      {"scenarios", scenarios},
      {"safety", {{"max_tx_dbm", in.safety.max_tx_dbm}}},
  };
}

}  // namespace hbc::config
