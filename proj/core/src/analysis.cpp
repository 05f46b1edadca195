#include "hbc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "hbc/error.hpp"
#include "hbc/records.hpp"

namespace hbc::analysis {

namespace {

std::string describe(const GainCurve& c) {
  return std::string(channel::to_string(c.daq_mode)) + " " + records::format_double(c.distance_cm) + " cm";
}

void require_same_grid(const GainCurve& a, const GainCurve& b) {
  const std::size_t n = std::min(a.points.size(), b.points.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a.points[i].freq_hz != b.points[i].freq_hz) {
      throw Error(Errc::GridMismatch, "grids of " + describe(a) + " and " + describe(b) +
                                          " differ at frequency " + records::format_double(a.points[i].freq_hz) +
                                          " Hz vs " + records::format_double(b.points[i].freq_hz) + " Hz");
    }
  }
  if (a.points.size() != b.points.size()) {
    const auto& longer = a.points.size() > b.points.size() ? a : b;
    throw Error(Errc::GridMismatch, "grids of " + describe(a) + " and " + describe(b) +
                                        " differ at frequency " + records::format_double(longer.points[n].freq_hz) +
                                        " Hz (present on one side only)");
  }
}

double mean(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

}  // namespace

void GainCurve::validate() const {
  if (points.size() < 2) throw Error(Errc::InvalidArgument, describe(*this) + ": a gain curve needs >= 2 points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].freq_hz) || !std::isfinite(points[i].gain_db)) {
      throw Error(Errc::InvalidArgument, describe(*this) + ": non-finite value");
    }
    if (i > 0 && !(points[i].freq_hz > points[i - 1].freq_hz)) {
      throw Error(Errc::InvalidArgument, describe(*this) + ": frequencies must be strictly increasing");
    }
  }
}

std::vector<double> GainCurve::gains() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.gain_db);
  return out;
}

std::vector<GainCurve> curves_from_records(const std::vector<records::GainRecord>& rows) {
  std::vector<GainCurve> curves;
  for (const auto& r : rows) {
    auto it = std::find_if(curves.begin(), curves.end(), [&](const GainCurve& c) {
      return c.daq_mode == r.daq_mode && c.distance_cm == r.distance_cm;
    });
    if (it == curves.end()) {
      curves.push_back({r.daq_mode, r.distance_cm, {}});
      it = std::prev(curves.end());
    }
    it->points.push_back({r.freq_hz, r.gain_db});
  }
  for (auto& c : curves) {
    std::stable_sort(c.points.begin(), c.points.end(),
                     [](const GainPoint& a, const GainPoint& b) { return a.freq_hz < b.freq_hz; });
  }
  return curves;
}

double mean_gap_db(const GainCurve& classical, const GainCurve& wireless) {
  if (classical.distance_cm != wireless.distance_cm) {
    throw Error(Errc::GridMismatch, "cannot compare " + describe(classical) + " with " + describe(wireless));
  }
  require_same_grid(classical, wireless);
  if (classical.points.empty()) throw Error(Errc::EmptyInput, "empty curves");
  double sum = 0.0;
  for (std::size_t i = 0; i < classical.points.size(); ++i) {
    sum += classical.points[i].gain_db - wireless.points[i].gain_db;
  }
  return sum / static_cast<double>(classical.points.size());
}

double grand_mean_gap(std::span<const double> gaps) {
  if (gaps.empty()) throw Error(Errc::EmptyInput, "no gaps to average");
  return mean(gaps);
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(Errc::GridMismatch, "series lengths differ");
  if (a.size() < 2) throw Error(Errc::EmptyInput, "pearson needs >= 2 samples");
  auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
  };
  if (constant(a) || constant(b)) throw Error(Errc::ZeroVariance, "pearson of a constant series");
  const double ma = mean(a);
  const double mb = mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) throw Error(Errc::ZeroVariance, "pearson of a constant series");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double pearson(const GainCurve& a, const GainCurve& b) {
  require_same_grid(a, b);
  const auto ga = a.gains();
  const auto gb = b.gains();
  return pearson(ga, gb);
}

GainPoint peak(const GainCurve& curve) {
  if (curve.points.empty()) throw Error(Errc::EmptyInput, "peak of an empty curve");
  GainPoint best = curve.points.front();
  for (const auto& p : curve.points) {
    if (p.gain_db > best.gain_db || (p.gain_db == best.gain_db && p.freq_hz < best.freq_hz)) best = p;
  }
  return best;
}

double fluctuation_db(const GainCurve& curve) {
  if (curve.points.empty()) throw Error(Errc::EmptyInput, "fluctuation of an empty curve");
  const auto [lo, hi] = std::minmax_element(curve.points.begin(), curve.points.end(),
                                            [](const GainPoint& a, const GainPoint& b) { return a.gain_db < b.gain_db; });
  return hi->gain_db - lo->gain_db;
}

double energy_per_bit(double tx_power_w, double data_rate_bps) {
  if (!(tx_power_w > 0) || !(data_rate_bps > 0) || !std::isfinite(tx_power_w) || !std::isfinite(data_rate_bps)) {
    throw Error(Errc::InvalidArgument, "power and data rate must be finite and > 0");
  }
  const double bit_period_s = 1.0 / data_rate_bps;
  return tx_power_w * bit_period_s;
}

namespace {

std::optional<double> optional_pearson(const GainCurve& a, const GainCurve& b) {
  try {
    return pearson(a, b);
  } catch (const Error& e) {
    if (e.code() != Errc::ZeroVariance) throw;
  }
  return std::nullopt;
}

}  // namespace

ComparisonReport compare_campaigns(const std::vector<records::GainRecord>& classical_rows,
                                   const std::vector<records::GainRecord>& wireless_rows, EnergyFigure energy) {
  auto by_distance = [](const std::vector<records::GainRecord>& rows, channel::DaqMode mode) {
    std::map<double, GainCurve> out;
    for (auto& c : curves_from_records(rows)) {
      if (c.daq_mode != mode) continue;
      c.validate();
      out.emplace(c.distance_cm, std::move(c));
    }
    return out;
  };
  const auto classical = by_distance(classical_rows, channel::DaqMode::Classical);
  const auto wireless = by_distance(wireless_rows, channel::DaqMode::Wireless);
  if (classical.empty() && wireless.empty()) throw Error(Errc::EmptyInput, "no classical or wireless curves");

  for (const auto& [d, _] : classical) {
    if (!wireless.contains(d)) {
      throw Error(Errc::MissingDistance, "distance " + records::format_double(d) + " cm has no wireless curve");
    }
  }
  for (const auto& [d, _] : wireless) {
    if (!classical.contains(d)) {
      throw Error(Errc::MissingDistance, "distance " + records::format_double(d) + " cm has no classical curve");
    }
  }

  ComparisonReport report;
  std::vector<double> gaps;
  for (const auto& [d, c] : classical) {
    const auto& w = wireless.at(d);
    DistanceComparison dc;
    dc.distance_cm = d;
    dc.mean_gap_db = mean_gap_db(c, w);
    dc.classical = {peak(c), fluctuation_db(c)};
    dc.wireless = {peak(w), fluctuation_db(w)};
    dc.correlation = optional_pearson(c, w);
    gaps.push_back(dc.mean_gap_db);
    report.distances.push_back(dc);
  }
  report.grand_mean_gap_db = grand_mean_gap(gaps);

  for (const auto* side : {&classical, &wireless}) {
    for (auto i = side->begin(); i != side->end(); ++i) {
      for (auto j = std::next(i); j != side->end(); ++j) {
        report.correlations.push_back(
            {i->second.daq_mode, i->first, j->first, optional_pearson(i->second, j->second)});
      }
    }
  }

  energy.joules_per_bit = energy_per_bit(energy.tx_power_w, energy.data_rate_bps);
  report.energy = energy;
  return report;
}

nlohmann::json to_json(const ComparisonReport& report) {
  using nlohmann::json;
  auto summary = [](const CurveSummary& s) {
    return json{{"peak_freq_hz", s.peak.freq_hz}, {"peak_gain_db", s.peak.gain_db}, {"fluctuation_db", s.fluctuation_db}};
  };
  json distances = json::array();
  for (const auto& d : report.distances) {
    distances.push_back({{"distance_cm", d.distance_cm},
                         {"mean_gap_db", d.mean_gap_db},
                         {"classical", summary(d.classical)},
                         {"wireless", summary(d.wireless)},
                         {"correlation", d.correlation ? json(*d.correlation) : json(nullptr)}});
  }
  json correlations = json::array();
  for (const auto& c : report.correlations) {
    correlations.push_back({{"daq_mode", channel::to_string(c.daq_mode)},
                            {"distance_a_cm", c.distance_a_cm},
                            {"distance_b_cm", c.distance_b_cm},
                            {"r", c.r ? json(*c.r) : json(nullptr)}});
  }
  return {{"distances", distances},
          {"grand_mean_gap_db", report.grand_mean_gap_db},
          {"correlations", correlations},
          {"energy_per_bit",
           {{"tx_power_w", report.energy.tx_power_w},
            {"data_rate_bps", report.energy.data_rate_bps},
            {"joules_per_bit", report.energy.joules_per_bit}}}};
}

}  // namespace hbc::analysis
