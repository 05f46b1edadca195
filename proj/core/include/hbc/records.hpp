#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hbc/campaign.hpp"

namespace hbc::records {

inline constexpr std::string_view kResultsHeader =
    "scenario,daq_mode,distance_cm,freq_hz,gain_db,rx_power_dbm,detector_v,adc_code";
inline constexpr std::string_view kMeasuredHeader = "daq_mode,distance_cm,freq_hz,gain_db";

/// One row of the measured-data format (also the projection of a results row).
struct GainRecord {
  channel::DaqMode daq_mode = channel::DaqMode::Wireless;
  double distance_cm = 0.0;
  double freq_hz = 0.0;
  double gain_db = 0.0;

  bool operator==(const GainRecord&) const = default;
};

/// Shortest-safe text for a double: 17 significant digits, "inf"/"-inf"/"nan".
std::string format_double(double v);

std::string to_csv(const std::vector<campaign::SamplePoint>& samples);
std::vector<campaign::SamplePoint> parse_results_csv(std::string_view text);

std::string to_measured_csv(const std::vector<GainRecord>& rows);
std::vector<GainRecord> parse_measured_csv(std::string_view text);

/// Reads either format, picking the parser from the header line.
std::vector<GainRecord> parse_gain_csv(std::string_view text);

/// Writes atomically (temp file + rename). Throws IoError.
void write_csv(const campaign::CampaignResult& result, const std::filesystem::path& path);
/// Throws IoError or FormatError.
std::vector<campaign::SamplePoint> read_csv(const std::filesystem::path& path);
std::vector<GainRecord> read_gain_csv(const std::filesystem::path& path);

std::vector<GainRecord> to_gain_records(const std::vector<campaign::SamplePoint>& samples);

std::string read_file(const std::filesystem::path& path);

}  // namespace hbc::records
