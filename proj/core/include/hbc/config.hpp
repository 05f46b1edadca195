#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "hbc/campaign.hpp"

namespace hbc::config {

/// Optional calibration block (`fit` key).
struct FitOptions {
  std::vector<std::string> free;
  /// log10 bounds per free parameter; missing entries default to initial +-2 decades.
  std::map<std::string, std::pair<double, double>> bounds_log10;
  std::optional<int> budget;
  std::optional<std::uint64_t> seed;
};

struct Config {
  campaign::CampaignInputs campaign;
  std::optional<FitOptions> fit;
};

/// The six-scenario layout of the on-body experiment: both DAQ modes at 10, 30, 50 cm.
std::vector<channel::Scenario> canonical_scenarios();

/// Parses a config document. Every key is optional; unknown keys at any level are
/// rejected with InvalidConfig naming the key path.
Config parse_config(const nlohmann::json& doc);
Config load_config(const std::filesystem::path& path);

nlohmann::json params_to_json(const channel::ChannelParams& p);
/// Fully resolved echo of a campaign configuration (used for result metadata).
nlohmann::json to_json(const campaign::CampaignInputs& inputs);

}  // namespace hbc::config
