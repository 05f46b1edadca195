#include "hbc/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

namespace hbc::svg {

namespace {

constexpr double kLeft = 70.0;
constexpr double kRight = 640.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 440.0;

constexpr std::array<std::string_view, 6> kPalette{"#1f77b4", "#d62728", "#2ca02c",
                                                   "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt2(double v) {
  double r = std::round(v * 100.0) / 100.0;
  if (r == 0.0) r = 0.0;  // no "-0.00"
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2f", r);
  return buf;
}

std::string fmt_label(double v) {
  char buf[48];
  if (std::abs(v - std::round(v)) < 1e-9) {
    std::snprintf(buf, sizeof buf, "%.0f", std::round(v) == 0.0 ? 0.0 : std::round(v));
  } else {
    std::snprintf(buf, sizeof buf, "%.6g", v);
  }
  return buf;
}

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// 1, 2 or 5 times a power of ten, giving at most ~`target` intervals over `span`.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

struct Range {
  double lo;
  double hi;
};

}  // namespace

std::string render_gain_chart(const std::vector<analysis::GainCurve>& curves, const std::string& title) {
  double fmin = std::numeric_limits<double>::infinity(), fmax = -fmin;
  double gmin = fmin, gmax = -fmin;
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      if (!std::isfinite(p.freq_hz) || !std::isfinite(p.gain_db)) continue;
      fmin = std::min(fmin, p.freq_hz / 1e6);
      fmax = std::max(fmax, p.freq_hz / 1e6);
      gmin = std::min(gmin, p.gain_db);
      gmax = std::max(gmax, p.gain_db);
    }
  }
  if (!std::isfinite(fmin)) {
    fmin = 0.0;
    fmax = 1.0;
    gmin = -1.0;
    gmax = 0.0;
  }
  if (fmax == fmin) {
    fmin -= 0.5;
    fmax += 0.5;
  }
  const double ystep = nice_step(std::max(gmax - gmin, 1.0), 8);
  Range y{std::floor(gmin / ystep) * ystep, std::ceil(gmax / ystep) * ystep};
  if (y.hi == y.lo) y.hi = y.lo + ystep;
  const double xstep = nice_step(fmax - fmin, 10);
  const Range x{fmin, fmax};

  auto px = [&](double mhz) { return kLeft + (mhz - x.lo) / (x.hi - x.lo) * (kRight - kLeft); };
  auto py = [&](double db) { return kBottom - (db - y.lo) / (y.hi - y.lo) * (kBottom - kTop); };

  std::vector<double> distances;
  for (const auto& c : curves) {
    if (std::find(distances.begin(), distances.end(), c.distance_cm) == distances.end()) {
      distances.push_back(c.distance_cm);
    }
  }
  std::sort(distances.begin(), distances.end());
  auto color = [&](double d) {
    const auto i = static_cast<std::size_t>(std::find(distances.begin(), distances.end(), d) - distances.begin());
    return kPalette[i % kPalette.size()];
  };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kWidth) + "\" height=\"" +
       std::to_string(kHeight) + "\" viewBox=\"0 0 " + std::to_string(kWidth) + " " + std::to_string(kHeight) +
       "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(kWidth) + "\" height=\"" + std::to_string(kHeight) +
       "\" fill=\"white\"/>\n";
  s += "<text x=\"" + fmt2((kLeft + kRight) / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" +
       escape(title) + "</text>\n";

  // Grid and tick labels.
  s += "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
  std::vector<double> xticks, yticks;
  for (auto k = static_cast<long>(std::ceil(x.lo / xstep - 1e-9)); k * xstep <= x.hi + 1e-9 * xstep; ++k) {
    xticks.push_back(static_cast<double>(k) * xstep);
  }
  for (auto k = static_cast<long>(std::llround(y.lo / ystep)); k * ystep <= y.hi + 1e-9 * ystep; ++k) {
    yticks.push_back(static_cast<double>(k) * ystep);
  }
  for (double t : xticks) {
    s += "<line x1=\"" + fmt2(px(t)) + "\" y1=\"" + fmt2(kTop) + "\" x2=\"" + fmt2(px(t)) + "\" y2=\"" +
         fmt2(kBottom) + "\"/>\n";
  }
  for (double t : yticks) {
    s += "<line x1=\"" + fmt2(kLeft) + "\" y1=\"" + fmt2(py(t)) + "\" x2=\"" + fmt2(kRight) + "\" y2=\"" +
         fmt2(py(t)) + "\"/>\n";
  }
  s += "</g>\n<g fill=\"#333333\">\n";
  for (double t : xticks) {
    s += "<text x=\"" + fmt2(px(t)) + "\" y=\"" + fmt2(kBottom + 18) + "\" text-anchor=\"middle\">" + fmt_label(t) +
         "</text>\n";
  }
  for (double t : yticks) {
    s += "<text x=\"" + fmt2(kLeft - 8) + "\" y=\"" + fmt2(py(t) + 4) + "\" text-anchor=\"end\">" + fmt_label(t) +
         "</text>\n";
  }
  s += "</g>\n";
  s += "<rect x=\"" + fmt2(kLeft) + "\" y=\"" + fmt2(kTop) + "\" width=\"" + fmt2(kRight - kLeft) + "\" height=\"" +
       fmt2(kBottom - kTop) + "\" fill=\"none\" stroke=\"#333333\"/>\n";
  s += "<text x=\"" + fmt2((kLeft + kRight) / 2) + "\" y=\"" + fmt2(kBottom + 42) +
       "\" text-anchor=\"middle\">Frequency (MHz)</text>\n";
  s += "<text x=\"18\" y=\"" + fmt2((kTop + kBottom) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
       fmt2((kTop + kBottom) / 2) + ")\">Channel gain (dB)</text>\n";

  // Curves and legend.
  double legend_y = kTop + 10;
  for (const auto& c : curves) {
    const bool wireless = c.daq_mode == channel::DaqMode::Wireless;
    const std::string dash = wireless ? " stroke-dasharray=\"6 4\"" : "";
    std::string pts;
    for (const auto& p : c.points) {
      if (!std::isfinite(p.freq_hz) || !std::isfinite(p.gain_db)) continue;
      if (!pts.empty()) pts += ' ';
      pts += fmt2(px(p.freq_hz / 1e6)) + "," + fmt2(py(p.gain_db));
    }
    const std::string name =
        std::string(channel::to_string(c.daq_mode)) + " " + fmt_label(c.distance_cm) + " cm";
    s += "<polyline fill=\"none\" stroke=\"" + std::string(color(c.distance_cm)) + "\" stroke-width=\"1.5\"" + dash +
         " points=\"" + pts + "\"><title>" + escape(name) + "</title></polyline>\n";
    s += "<line x1=\"" + fmt2(kRight + 15) + "\" y1=\"" + fmt2(legend_y) + "\" x2=\"" + fmt2(kRight + 45) +
         "\" y2=\"" + fmt2(legend_y) + "\" stroke=\"" + std::string(color(c.distance_cm)) +
         "\" stroke-width=\"1.5\"" + dash + "/>\n";
    s += "<text x=\"" + fmt2(kRight + 52) + "\" y=\"" + fmt2(legend_y + 4) + "\">" + escape(name) + "</text>\n";
    legend_y += 20;
  }
  s += "</svg>\n";
  return s;
}

}  // namespace hbc::svg
