#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "hbc/analysis.hpp"
#include "hbc/atomic_file.hpp"
#include "hbc/calibrate.hpp"
#include "hbc/campaign.hpp"
#include "hbc/config.hpp"
#include "hbc/error.hpp"
#include "hbc/records.hpp"
#include "hbc/svg.hpp"

namespace hbc::cli {

namespace {

const std::vector<std::string> kDefaultFree{"k_int", "c_gr_wireless", "c_gr_classical", "c_gt"};

std::string fixed(double v, int digits) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(digits) << v;
  return ss.str();
}

// Shortest text that parses back to the same double.
std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

int run_safety_check(const CommandPlan& plan, std::ostream& out) {
  const auto verdict = campaign::check_safety(plan.tx_dbm, campaign::SafetyPolicy{});
  if (verdict) {
    out << "ok: tx power " << shortest(verdict.tx_power_dbm) << " dBm <= " << shortest(verdict.max_tx_dbm)
        << " dBm\n";
    return kExitOk;
  }
  out << "violation: tx power " << shortest(verdict.tx_power_dbm) << " dBm exceeds "
      << shortest(verdict.max_tx_dbm) << " dBm\n";
  return kExitSafety;
}

int run_sweep(const CommandPlan& plan, std::ostream& out) {
  auto cfg = config::load_config(plan.config);
  auto inputs = cfg.campaign;
  inputs.seed = plan.seed.value_or(0);
  inputs.threads = threads_from_env();

  const auto result = campaign::run_campaign(inputs);

  auto echo = inputs;
  echo.threads = 0;  // worker count does not affect results; keep metadata reproducible
  nlohmann::json meta{
      {"config", config::to_json(echo)},
      {"seed", inputs.seed},
      {"samples", result.samples.size()},
      {"tx_power_dbm", result.tx_power_dbm},
      {"tx_power_reference", "fundamental of the rail square wave into tx.ref_load_ohm"},
      {"rx_power_reference", "power into rx.r_in at the detector input, after the band-pass filter"},
  };
  const auto csv = records::to_csv(result.samples);
  write_file_atomic(plan.out, csv);
  write_file_atomic(plan.out + ".meta.json", meta.dump(2) + "\n");

  for (const auto& c : analysis::curves_from_records(records::to_gain_records(result.samples))) {
    const auto pk = analysis::peak(c);
    double lo = pk.gain_db;
    for (const auto& p : c.points) lo = std::min(lo, p.gain_db);
    out << channel::to_string(c.daq_mode) << " " << records::format_double(c.distance_cm) << " cm: "
        << c.points.size() << " points, gain " << fixed(lo, 2) << " .. " << fixed(pk.gain_db, 2)
        << " dB, peak at " << fixed(pk.freq_hz / 1e6, 3) << " MHz\n";
  }
  out << "wrote " << result.samples.size() << " rows to " << plan.out << "\n";
  return kExitOk;
}

int run_analyze(const CommandPlan& plan, std::ostream& out) {
  const auto classical = records::read_gain_csv(plan.classical);
  const auto wireless = records::read_gain_csv(plan.wireless);
  const auto report = analysis::compare_campaigns(classical, wireless);

  std::string svg_text;
  if (plan.svg) {
    std::vector<analysis::GainCurve> curves;
    for (auto mode : {channel::DaqMode::Classical, channel::DaqMode::Wireless}) {
      const auto& rows = mode == channel::DaqMode::Classical ? classical : wireless;
      auto side = analysis::curves_from_records(rows);
      std::erase_if(side, [&](const analysis::GainCurve& c) { return c.daq_mode != mode; });
      std::stable_sort(side.begin(), side.end(), [](const auto& a, const auto& b) { return a.distance_cm < b.distance_cm; });
      curves.insert(curves.end(), side.begin(), side.end());
    }
    svg_text = svg::render_gain_chart(curves, "Channel gain: classical (solid) vs wireless (dashed)");
  }

  write_file_atomic(plan.report, analysis::to_json(report).dump(2) + "\n");
  if (plan.svg) write_file_atomic(*plan.svg, svg_text);

  for (const auto& d : report.distances) {
    out << records::format_double(d.distance_cm) << " cm: mean gap " << fixed(d.mean_gap_db, 2)
        << " dB, classical peak " << fixed(d.classical.peak.gain_db, 2) << " dB @ "
        << fixed(d.classical.peak.freq_hz / 1e6, 3) << " MHz, wireless fluctuation "
        << fixed(d.wireless.fluctuation_db, 2) << " dB\n";
  }
  out << "grand mean gap " << fixed(report.grand_mean_gap_db, 2) << " dB\n";
  return kExitOk;
}

int run_calibrate(const CommandPlan& plan, std::ostream& out) {
  const auto cfg = config::load_config(plan.config);
  const auto rows = records::read_gain_csv(plan.measured);

  calibrate::FitSpec spec;
  spec.initial = cfg.campaign.params;
  spec.measured = analysis::curves_from_records(rows);
  const auto names = cfg.fit && !cfg.fit->free.empty() ? cfg.fit->free : kDefaultFree;
  for (const auto& name : names) {
    auto fp = calibrate::default_free_param(name, spec.initial);
    if (cfg.fit) {
      if (auto it = cfg.fit->bounds_log10.find(name); it != cfg.fit->bounds_log10.end()) {
        fp.lower_log10 = it->second.first;
        fp.upper_log10 = it->second.second;
      }
    }
    spec.free.push_back(fp);
  }
  spec.budget = plan.budget.value_or(cfg.fit && cfg.fit->budget ? *cfg.fit->budget : 2000);
  spec.seed = plan.seed.value_or(cfg.fit && cfg.fit->seed ? *cfg.fit->seed : 0);

  const auto fitted = calibrate::fit(spec);
  write_file_atomic(plan.out, nlohmann::json{{"params", config::params_to_json(fitted.params)}}.dump(2) + "\n");

  for (const auto& fp : spec.free) {
    const auto member = channel::find_param(fp.name)->member;
    out << fp.name << ": " << records::format_double(spec.initial.*member) << " -> "
        << records::format_double(fitted.params.*member) << "\n";
  }
  out << "rmse " << fixed(fitted.rmse_db, 4) << " dB after " << fitted.evaluations << " evaluations ("
      << (fitted.converged ? "converged" : "not converged") << ", " << fitted.failed_evaluations
      << " rejected)\n";
  return kExitOk;
}

}  // namespace

unsigned threads_from_env() {
  const char* raw = std::getenv("HBC_CHANSIM_THREADS");
  if (!raw || !*raw) return 0;
  char* end = nullptr;
  const unsigned long v = std::strtoul(raw, &end, 10);
  if (*end != '\0' || v == 0 || v > 1024) return 0;
  return static_cast<unsigned>(v);
}

CommandPlan parse_args(const std::vector<std::string>& args) {
  CommandPlan plan;
  CLI::App app{"Capacitive body-channel simulator and measurement-campaign analysis", "hbc-chansim"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  int budget = 0;
  const CLI::Validator path{[](std::string& s) { return s.empty() ? std::string("path must not be empty") : std::string(); },
                            "PATH"};

  auto* sweep = app.add_subcommand("sweep", "Run a frequency-sweep campaign and write a results CSV");
  sweep->add_option("--config", plan.config, "Campaign config (JSON)")->check(path)->required();
  sweep->add_option("--out", plan.out, "Results CSV")->check(path)->required();
  auto* sweep_seed = sweep->add_option("--seed", seed, "Seed for optional detector dither");

  auto* analyze = app.add_subcommand("analyze", "Compare classical and wireless gain curves");
  analyze->add_option("--classical", plan.classical, "CSV holding classical-DAQ curves")->check(path)->required();
  analyze->add_option("--wireless", plan.wireless, "CSV holding wireless-DAQ curves")->check(path)->required();
  analyze->add_option("--report", plan.report, "Output JSON report")->check(path)->required();
  std::string svg_path;
  auto* svg_opt = analyze->add_option("--svg", svg_path, "Optional SVG chart")->check(path);

  auto* calibrate = app.add_subcommand("calibrate", "Fit channel parameters to measured gain curves");
  calibrate->add_option("--measured", plan.measured, "Measured-data CSV")->check(path)->required();
  calibrate->add_option("--config", plan.config, "Config with initial parameters")->check(path)->required();
  calibrate->add_option("--out", plan.out, "Output JSON params block")->check(path)->required();
  auto* cal_seed = calibrate->add_option("--seed", seed, "Restart jitter seed");
  auto* cal_budget = calibrate->add_option("--budget", budget, "Objective evaluation budget")
                         ->check(CLI::NonNegativeNumber);

  auto* safety = app.add_subcommand("safety-check", "Check a Tx power against the 5 dBm limit");
  safety->add_option("--tx-dbm", plan.tx_dbm, "Transmit power in dBm")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    plan.subcommand = Subcommand::Help;
    const auto parsed = app.get_subcommands();
    plan.help = parsed.empty() ? app.help() : parsed.front()->help();
    return plan;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (sweep->parsed()) {
    plan.subcommand = Subcommand::Sweep;
    if (sweep_seed->count()) plan.seed = seed;
  } else if (analyze->parsed()) {
    plan.subcommand = Subcommand::Analyze;
    if (svg_opt->count()) plan.svg = svg_path;
  } else if (calibrate->parsed()) {
    plan.subcommand = Subcommand::Calibrate;
    if (cal_seed->count()) plan.seed = seed;
    if (cal_budget->count()) plan.budget = budget;
  } else {
    plan.subcommand = Subcommand::SafetyCheck;
  }
  return plan;
}

int execute(const CommandPlan& plan, std::ostream& out, std::ostream& err) {
  try {
    switch (plan.subcommand) {
      case Subcommand::Help:
        out << plan.help;
        return kExitOk;
      case Subcommand::SafetyCheck:
        return run_safety_check(plan, out);
      case Subcommand::Sweep:
        return run_sweep(plan, out);
      case Subcommand::Analyze:
        return run_analyze(plan, out);
      case Subcommand::Calibrate:
        return run_calibrate(plan, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == Errc::SafetyViolation ? kExitSafety : kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CommandPlan plan;
  try {
    plan = parse_args(args);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  }
  return execute(plan, out, err);
}

}  // namespace hbc::cli
