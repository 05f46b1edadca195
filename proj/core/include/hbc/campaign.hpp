#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hbc/channel.hpp"
#include "hbc/frontend.hpp"

namespace hbc::campaign {

enum class Spacing { Linear, Log };

struct SweepConfig {
  double f_start_hz = 4e6;
  double f_stop_hz = 64e6;
  int points = 61;
  Spacing spacing = Spacing::Linear;
  /// Adds uniform +-half-LSB noise to the detector voltage, seeded per sample.
  bool dither = false;

  bool operator==(const SweepConfig&) const = default;
  void validate() const;
};

struct SafetyPolicy {
  double max_tx_dbm = 5.0;

  bool operator==(const SafetyPolicy&) const = default;
};

struct SafetyVerdict {
  bool ok = false;
  double tx_power_dbm = 0.0;
  double max_tx_dbm = 0.0;

  explicit operator bool() const noexcept { return ok; }
};

/// ok iff tx_power_dbm is finite and <= the policy maximum (boundary included).
SafetyVerdict check_safety(double tx_power_dbm, const SafetyPolicy& policy);

/// Power of the carrier fundamental into the Tx reference load, in dBm.
double tx_power_dbm(const frontend::TxModel& tx);

/// `points` frequencies from f_start to f_stop inclusive, strictly increasing.
std::vector<double> frequency_grid(const SweepConfig& cfg);

struct SamplePoint {
  std::string scenario;
  channel::DaqMode daq_mode = channel::DaqMode::Wireless;
  double distance_cm = 0.0;
  double freq_hz = 0.0;
  double gain_db = 0.0;
  double rx_power_dbm = 0.0;
  double detector_v = 0.0;
  std::int64_t adc_code = 0;

  bool operator==(const SamplePoint&) const = default;
};

struct CampaignInputs {
  std::vector<channel::Scenario> scenarios;
  channel::ChannelParams params;
  frontend::TxModel tx;
  frontend::RxFrontendModel rx;
  SweepConfig sweep;
  SafetyPolicy safety;
  std::uint64_t seed = 0;
  /// 0 selects std::thread::hardware_concurrency().
  unsigned threads = 0;

  bool operator==(const CampaignInputs&) const = default;
};

struct CampaignResult {
  CampaignInputs config;
  double tx_power_dbm = 0.0;
  std::vector<SamplePoint> samples;
};

/// Identifier used in the `scenario` column, e.g. "s0-classical-10cm".
std::string scenario_id(std::size_t index, const channel::Scenario& s);

/// Runs every scenario over the sweep grid.
///
/// The safety gate is evaluated first; a violation throws SafetyViolation before
/// any simulation. Samples are ordered by scenario declaration order, then
/// ascending frequency, independently of how many workers evaluate them. Each
/// grid frequency must be a valid Tx carrier (4..64 MHz).
CampaignResult run_campaign(const CampaignInputs& inputs);

/// Detector input power for a received peak voltage at `freq_hz`: power into
/// rx.r_in plus the band-pass gain.
double detector_input_dbm(const frontend::RxFrontendModel& rx, double v_peak, double freq_hz);

}  // namespace hbc::campaign
