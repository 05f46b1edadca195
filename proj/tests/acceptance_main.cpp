// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the number of failures.
//
// usage: hbc_acceptance <path to hbc-chansim> <work dir>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "hbc/analysis.hpp"
#include "hbc/calibrate.hpp"
#include "hbc/campaign.hpp"
#include "hbc/channel.hpp"
#include "hbc/config.hpp"
#include "hbc/frontend.hpp"
#include "hbc/records.hpp"
#include "oracles.hpp"

using namespace hbc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (limit_s > 0 && secs >= limit_s) {
    o.require(false, "runtime " + std::to_string(secs) + " s over limit " + std::to_string(limit_s) + " s");
  }
  if (!o.pass) ++failures;
  std::printf("[%s] %d. %s (%.3f s)%s%s\n", o.pass ? "PASS" : "FAIL", id, name, secs, o.detail.empty() ? "" : ": ",
              o.detail.c_str());
  std::fflush(stdout);
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

int shell(const std::string& cmd) {
  const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<campaign::SamplePoint> canonical_samples() {
  campaign::CampaignInputs in;
  in.scenarios = config::canonical_scenarios();
  return campaign::run_campaign(in).samples;
}

Outcome solver_oracles() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> logf(3.0, 8.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double f = std::pow(10.0, logf(rng));
    const auto l = test::random_ladder(rng, f);
    worst = std::max(worst, test::rel_err(circuit::solve_ac(l.net, f).voltage("out"), l.expected));
  }
  o.require(worst <= 1e-9, "ladder relative error " + num(worst));

  std::uniform_int_distribution<int> size(3, 8);
  int checked = 0;
  double worst_recip = 0.0;
  for (int trial = 0; trial < 2000 && checked < 120; ++trial) {
    const auto edges = test::random_rc_network(rng, size(rng));
    std::vector<std::size_t> resistive;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (edges[i].part.kind == test::Kind::R) resistive.push_back(i);
    }
    std::shuffle(resistive.begin(), resistive.end(), rng);
    const double f = std::pow(10.0, logf(rng));
    const auto y_km = test::transfer_admittance(edges, resistive[0], resistive[1], f);
    const auto y_mk = test::transfer_admittance(edges, resistive[1], resistive[0], f);
    if (test::weakly_coupled(edges, resistive[0], resistive[1], f)) continue;
    worst_recip = std::max(worst_recip, test::rel_err(y_mk, y_km));
    ++checked;
  }
  o.require(checked == 120, "only " + std::to_string(checked) + " coupled networks drawn");
  o.require(worst_recip <= 1e-9, "reciprocity relative error " + num(worst_recip));
  o.detail = o.pass ? "100 ladders max err " + num(worst) + ", 120 networks max err " + num(worst_recip) : o.detail;
  return o;
}

Outcome frontend_corners() {
  Outcome o;
  const frontend::RxFrontendModel rx;
  const double lo = frontend::bandpass_gain_db(rx, 160.0);
  const double hi = frontend::bandpass_gain_db(rx, 70e6);
  o.require(std::abs(lo + 3.0103) <= 1e-3, "160 Hz gives " + num(lo));
  o.require(std::abs(hi + 3.0103) <= 1e-3, "70 MHz gives " + num(hi));
  if (o.pass) o.detail = "160 Hz " + num(lo) + " dB, 70 MHz " + num(hi) + " dB";
  return o;
}

Outcome chain_roundtrip() {
  Outcome o;
  const frontend::RxFrontendModel rx;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double p = rx.det_intercept_dbm + rx.dynamic_range_db * i / 999.0;
    const auto code = frontend::adc_quantize(rx, frontend::detector_voltage(rx, p));
    worst = std::max(worst, std::abs(frontend::code_to_dbm(rx, code) - p));
  }
  o.require(worst <= 0.0264, "max error " + num(worst) + " dB");
  if (o.pass) o.detail = "max error " + num(worst) + " dB over 1000 points";
  return o;
}

Outcome reported_scalars() {
  Outcome o;
  const double epb = analysis::energy_per_bit(2.71e-3, 1e6);
  o.require(epb == 2.71e-9, "energy per bit " + num(epb));
  const double grand = analysis::grand_mean_gap(std::vector<double>{11.17, 20.34, 22.95});
  char shown[16];
  std::snprintf(shown, sizeof shown, "%.2f", grand);
  o.require(std::abs(grand - 18.1533) <= 5e-4 && std::string(shown) == "18.15", "grand mean " + num(grand));
  const analysis::GainCurve c{channel::DaqMode::Wireless, 50, {{4e6, -67.49}, {5e6, -66.58}}};
  const double fl = analysis::fluctuation_db(c);
  o.require(std::abs(fl - 0.91) <= 1e-9, "fluctuation " + num(fl));
  if (o.pass) o.detail = "2.71e-09 J/bit, " + std::string(shown) + " dB, " + num(fl) + " dB";
  return o;
}

Outcome safety_gate(const std::string& exe) {
  Outcome o;
  o.require(static_cast<bool>(campaign::check_safety(5.0, {})), "5.0 dBm rejected by library");
  o.require(!campaign::check_safety(5.01, {}), "5.01 dBm accepted by library");
  const int ok = shell(quote(exe) + " safety-check --tx-dbm 5.0");
  const int bad = shell(quote(exe) + " safety-check --tx-dbm 5.01");
  o.require(ok == 0, "CLI exit for 5.0 dBm is " + std::to_string(ok));
  o.require(bad == 3, "CLI exit for 5.01 dBm is " + std::to_string(bad));
  if (o.pass) o.detail = "CLI exits 0 and 3";
  return o;
}

Outcome qualitative() {
  Outcome o;
  const auto samples = canonical_samples();
  const auto curves = analysis::curves_from_records(records::to_gain_records(samples));
  auto find = [&](channel::DaqMode m, double d) -> const analysis::GainCurve& {
    return *std::find_if(curves.begin(), curves.end(),
                         [&](const auto& c) { return c.daq_mode == m && c.distance_cm == d; });
  };
  using channel::DaqMode;
  std::vector<double> gaps;
  for (double d : {10.0, 30.0, 50.0}) {
    const auto& c = find(DaqMode::Classical, d);
    const auto& w = find(DaqMode::Wireless, d);
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      o.require(c.points[i].gain_db >= w.points[i].gain_db,
                "(a) classical below wireless at " + num(d) + " cm, " + num(c.points[i].freq_hz) + " Hz");
    }
    gaps.push_back(analysis::mean_gap_db(c, w));
  }
  o.require(gaps[0] < gaps[1] && gaps[1] < gaps[2], "(b) gaps not increasing: " + num(gaps[0]) + " " +
                                                        num(gaps[1]) + " " + num(gaps[2]));
  const double grand = analysis::grand_mean_gap(gaps);
  o.require(std::abs(grand - 18.15) <= 6.0, "(c) grand mean " + num(grand));
  const auto& w10 = find(DaqMode::Wireless, 10);
  for (double d : {30.0, 50.0}) {
    const auto& wd = find(DaqMode::Wireless, d);
    for (std::size_t i = 0; i < w10.points.size(); ++i) {
      o.require(w10.points[i].gain_db >= wd.points[i].gain_db,
                "(d) wireless 10 cm below " + num(d) + " cm at " + num(w10.points[i].freq_hz) + " Hz");
    }
  }
  if (o.pass) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "gaps %.2f / %.2f / %.2f dB, grand mean %.2f dB", gaps[0], gaps[1], gaps[2], grand);
    o.detail = buf;
  }
  return o;
}

Outcome calibration() {
  Outcome o;
  channel::ChannelParams truth;
  truth.k_int *= 3.0;
  calibrate::FitSpec spec;
  spec.budget = 2000;
  for (const auto& s : config::canonical_scenarios()) {
    analysis::GainCurve c{s.daq_mode, s.distance_cm, {}};
    for (double f : campaign::frequency_grid({})) c.points.push_back({f, channel::channel_gain_db(s, truth, f)});
    spec.measured.push_back(std::move(c));
  }
  spec.free = {calibrate::default_free_param("k_int", spec.initial)};
  const auto r = calibrate::fit(spec);
  const double rel = std::abs(r.params.k_int - truth.k_int) / truth.k_int;
  o.require(rel <= 0.05, "k_int relative error " + num(rel));
  o.require(r.rmse_db <= 0.05, "rmse " + num(r.rmse_db) + " dB");
  o.require(r.evaluations <= 2000, std::to_string(r.evaluations) + " evaluations");
  if (o.pass) {
    o.detail = "k_int error " + num(rel) + ", rmse " + num(r.rmse_db) + " dB, " + std::to_string(r.evaluations) +
               " evaluations";
  }
  return o;
}

Outcome golden(const std::string& exe, const fs::path& work) {
  Outcome o;
  fs::remove_all(work);
  fs::create_directories(work);
  const auto cfg = (fs::path(HBC_SOURCE_DIR) / "configs" / "canonical_campaign.json").string();
  for (const char* tag : {"1", "2"}) {
    const auto csv = (work / (std::string("run") + tag + ".csv")).string();
    o.require(shell(quote(exe) + " sweep --config " + quote(cfg) + " --out " + quote(csv)) == 0, "sweep failed");
  }
  for (const char* tag : {"1", "2"}) {
    const auto t = std::string(tag);
    o.require(shell(quote(exe) + " analyze --classical " + quote((work / "run1.csv").string()) + " --wireless " +
                    quote((work / "run2.csv").string()) + " --report " + quote((work / ("report" + t + ".json")).string()) +
                    " --svg " + quote((work / ("chart" + t + ".svg")).string())) == 0,
              "analyze failed");
  }
  if (!o.pass) return o;
  for (const auto& [a, b] : {std::pair{"run1.csv", "run2.csv"}, std::pair{"run1.csv.meta.json", "run2.csv.meta.json"},
                             std::pair{"report1.json", "report2.json"}, std::pair{"chart1.svg", "chart2.svg"}}) {
    o.require(records::read_file(work / a) == records::read_file(work / b), std::string(a) + " differs from " + b);
  }
  if (o.pass) o.detail = "CSV, meta, JSON and SVG byte-identical";
  return o;
}

Outcome campaign_shape() {
  Outcome o;
  const auto samples = canonical_samples();
  o.require(samples.size() == 366, std::to_string(samples.size()) + " rows");
  const frontend::RxFrontendModel rx;
  const double v_src = frontend::square_fundamental_peak(frontend::TxModel{}.rail_v);
  std::size_t bad = 0;
  for (const auto& s : samples) {
    const double gain = channel::channel_gain_db({s.daq_mode, s.distance_cm}, {}, s.freq_hz);
    const double p = campaign::detector_input_dbm(rx, v_src * std::pow(10.0, gain / 20.0), s.freq_hz);
    const bool ok = std::abs(s.gain_db - gain) <= 1e-9 && std::abs(s.rx_power_dbm - p) <= 1e-9 &&
                    s.detector_v == frontend::detector_voltage(rx, s.rx_power_dbm) &&
                    s.adc_code == frontend::adc_quantize(rx, s.detector_v);
    if (!ok) ++bad;
  }
  o.require(bad == 0, std::to_string(bad) + " inconsistent rows");
  if (o.pass) o.detail = "366 consistent rows";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: %s <hbc-chansim> <work dir>\n", argv[0]);
    return 2;
  }
  const std::string exe = argv[1];
  const fs::path work = argv[2];

  report(1, "solver matches ladder oracles and reciprocity", 5.0, solver_oracles);
  report(2, "band-pass corners at -3.0103 dB", 0, frontend_corners);
  report(3, "measurement chain round trip within 0.0264 dB", 0, chain_roundtrip);
  report(4, "reported scalar regression", 0, reported_scalars);
  report(5, "safety gate at 5 dBm", 0, [&] { return safety_gate(exe); });
  report(6, "default topology qualitative reproduction", 10.0, qualitative);
  report(7, "planted k_int recovery", 60.0, calibration);
  report(8, "golden outputs are deterministic", 0, [&] { return golden(exe, work); });
  report(9, "canonical campaign shape", 0, campaign_shape);

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
