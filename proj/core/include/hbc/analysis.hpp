#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "hbc/channel.hpp"
#include "hbc/records.hpp"

namespace hbc::analysis {

struct GainPoint {
  double freq_hz;
  double gain_db;

  bool operator==(const GainPoint&) const = default;
};

struct GainCurve {
  channel::DaqMode daq_mode = channel::DaqMode::Wireless;
  double distance_cm = 0.0;
  std::vector<GainPoint> points;

  /// >= 2 points, finite values, strictly increasing frequency. Throws InvalidArgument.
  void validate() const;
  std::vector<double> gains() const;
};

/// Groups records into one curve per (mode, distance), sorted by frequency, in
/// first-appearance order.
std::vector<GainCurve> curves_from_records(const std::vector<records::GainRecord>& rows);

/// Mean over the grid of (classical - wireless). Throws GridMismatch naming the
/// first differing frequency.
double mean_gap_db(const GainCurve& classical, const GainCurve& wireless);

double grand_mean_gap(std::span<const double> gaps);

double pearson(std::span<const double> a, std::span<const double> b);
double pearson(const GainCurve& a, const GainCurve& b);

/// Maximum gain; ties go to the lowest frequency.
GainPoint peak(const GainCurve& curve);

/// max - min of the gain values.
double fluctuation_db(const GainCurve& curve);

double energy_per_bit(double tx_power_w, double data_rate_bps);

struct CurveSummary {
  GainPoint peak;
  double fluctuation_db = 0.0;
};

struct DistanceComparison {
  double distance_cm = 0.0;
  double mean_gap_db = 0.0;
  CurveSummary classical;
  CurveSummary wireless;
  /// Pearson r between the classical and wireless curves; empty when either is constant.
  std::optional<double> correlation;
};

struct Correlation {
  channel::DaqMode daq_mode;
  double distance_a_cm;
  double distance_b_cm;
  /// Empty when either curve is constant.
  std::optional<double> r;
};

struct EnergyFigure {
  double tx_power_w = 2.71e-3;
  double data_rate_bps = 1e6;
  double joules_per_bit = 0.0;
};

struct ComparisonReport {
  std::vector<DistanceComparison> distances;  // ascending distance
  double grand_mean_gap_db = 0.0;
  std::vector<Correlation> correlations;      // per mode, distance pairs a < b
  EnergyFigure energy;
};

/// Pairs classical and wireless curves by distance and assembles every statistic.
/// Throws MissingDistance when a distance exists on only one side and GridMismatch
/// when paired grids differ.
ComparisonReport compare_campaigns(const std::vector<records::GainRecord>& classical,
                                   const std::vector<records::GainRecord>& wireless,
                                   EnergyFigure energy = {});

nlohmann::json to_json(const ComparisonReport& report);

}  // namespace hbc::analysis
