#include "hbc/records.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hbc/atomic_file.hpp"
#include "hbc/error.hpp"

namespace hbc::records {

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_double(std::string_view field, std::size_t line, std::string_view column) {
  double v = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (field.empty() || ec != std::errc{} || ptr != end) {
    throw FormatError(line, "column '" + std::string(column) + "': not a number '" + std::string(field) + "'");
  }
  return v;
}

std::int64_t parse_int(std::string_view field, std::size_t line, std::string_view column) {
  std::int64_t v = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (field.empty() || ec != std::errc{} || ptr != end) {
    throw FormatError(line, "column '" + std::string(column) + "': not an integer '" + std::string(field) + "'");
  }
  return v;
}

channel::DaqMode parse_mode(std::string_view field, std::size_t line) {
  if (field == "classical") return channel::DaqMode::Classical;
  if (field == "wireless") return channel::DaqMode::Wireless;
  throw FormatError(line, "column 'daq_mode': expected classical|wireless, got '" + std::string(field) + "'");
}

// Calls `row(fields, line_no)` for every data line after checking the header.
template <typename RowFn>
void for_each_row(std::string_view text, std::string_view header, std::size_t columns, RowFn&& row) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool saw_header = false;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    auto line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!saw_header) {
      if (line != header) throw FormatError(line_no, "expected header '" + std::string(header) + "'");
      saw_header = true;
      continue;
    }
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != columns) {
      throw FormatError(line_no, "expected " + std::to_string(columns) + " fields, found " +
                                     std::to_string(fields.size()));
    }
    row(fields, line_no);
  }
  if (!saw_header) throw FormatError(1, "missing header");
}

std::string_view first_line(std::string_view text) {
  auto line = text.substr(0, text.find('\n'));
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

std::string to_csv(const std::vector<campaign::SamplePoint>& samples) {
  std::string out(kResultsHeader);
  out += '\n';
  for (const auto& s : samples) {
    out += s.scenario;
    out += ',';
    out += channel::to_string(s.daq_mode);
    for (double v : {s.distance_cm, s.freq_hz, s.gain_db, s.rx_power_dbm, s.detector_v}) {
      out += ',';
      out += format_double(v);
    }
    out += ',';
    out += std::to_string(s.adc_code);
    out += '\n';
  }
  return out;
}

std::vector<campaign::SamplePoint> parse_results_csv(std::string_view text) {
  std::vector<campaign::SamplePoint> out;
  for_each_row(text, kResultsHeader, 8, [&](const std::vector<std::string_view>& f, std::size_t line) {
    campaign::SamplePoint p;
    if (f[0].empty()) throw FormatError(line, "column 'scenario' is empty");
    p.scenario = std::string(f[0]);
    p.daq_mode = parse_mode(f[1], line);
    p.distance_cm = parse_double(f[2], line, "distance_cm");
    p.freq_hz = parse_double(f[3], line, "freq_hz");
    p.gain_db = parse_double(f[4], line, "gain_db");
    p.rx_power_dbm = parse_double(f[5], line, "rx_power_dbm");
    p.detector_v = parse_double(f[6], line, "detector_v");
    p.adc_code = parse_int(f[7], line, "adc_code");
    out.push_back(std::move(p));
  });
  return out;
}

std::string to_measured_csv(const std::vector<GainRecord>& rows) {
  std::string out(kMeasuredHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += channel::to_string(r.daq_mode);
    for (double v : {r.distance_cm, r.freq_hz, r.gain_db}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::vector<GainRecord> parse_measured_csv(std::string_view text) {
  std::vector<GainRecord> out;
  for_each_row(text, kMeasuredHeader, 4, [&](const std::vector<std::string_view>& f, std::size_t line) {
    out.push_back({parse_mode(f[0], line), parse_double(f[1], line, "distance_cm"),
                   parse_double(f[2], line, "freq_hz"), parse_double(f[3], line, "gain_db")});
  });
  return out;
}

std::vector<GainRecord> parse_gain_csv(std::string_view text) {
  const auto header = first_line(text);
  if (header == kResultsHeader) return to_gain_records(parse_results_csv(text));
  if (header == kMeasuredHeader) return parse_measured_csv(text);
  throw FormatError(1, "unrecognized header '" + std::string(header) + "'");
}

std::vector<GainRecord> to_gain_records(const std::vector<campaign::SamplePoint>& samples) {
  std::vector<GainRecord> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back({s.daq_mode, s.distance_cm, s.freq_hz, s.gain_db});
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(Errc::IoError, "read from '" + path.string() + "' failed");
  return std::move(ss).str();
}

void write_csv(const campaign::CampaignResult& result, const std::filesystem::path& path) {
  write_file_atomic(path, to_csv(result.samples));
}

std::vector<campaign::SamplePoint> read_csv(const std::filesystem::path& path) {
  return parse_results_csv(read_file(path));
}

std::vector<GainRecord> read_gain_csv(const std::filesystem::path& path) { return parse_gain_csv(read_file(path)); }

}  // namespace hbc::records
