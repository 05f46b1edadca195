#include "hbc/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <random>
#include <thread>

#include "hbc/error.hpp"
#include "hbc/records.hpp"

namespace hbc::campaign {

void SweepConfig::validate() const {
  if (!(std::isfinite(f_start_hz) && std::isfinite(f_stop_hz) && f_start_hz > 0 && f_start_hz <= f_stop_hz)) {
    throw Error(Errc::InvalidConfig, "sweep requires 0 < f_start_hz <= f_stop_hz");
  }
  if (points < 2) throw Error(Errc::InvalidConfig, "sweep requires points >= 2");
  if (f_start_hz == f_stop_hz) throw Error(Errc::InvalidConfig, "sweep with >= 2 points needs f_start_hz < f_stop_hz");
}

SafetyVerdict check_safety(double tx_power_dbm, const SafetyPolicy& policy) {
  SafetyVerdict v;
  v.tx_power_dbm = tx_power_dbm;
  v.max_tx_dbm = policy.max_tx_dbm;
  v.ok = std::isfinite(tx_power_dbm) && std::isfinite(policy.max_tx_dbm) && tx_power_dbm <= policy.max_tx_dbm;
  return v;
}

double tx_power_dbm(const frontend::TxModel& tx) {
  return frontend::rx_power_dbm(frontend::square_fundamental_peak(tx.rail_v), tx.ref_load_ohm);
}

std::vector<double> frequency_grid(const SweepConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(cfg.points);
  std::vector<double> grid(n);
  const double last = static_cast<double>(n - 1);
  if (cfg.spacing == Spacing::Linear) {
    const double step = (cfg.f_stop_hz - cfg.f_start_hz) / last;
    for (std::size_t i = 0; i < n; ++i) grid[i] = cfg.f_start_hz + step * static_cast<double>(i);
  } else {
    const double a = std::log10(cfg.f_start_hz);
    const double b = std::log10(cfg.f_stop_hz);
    for (std::size_t i = 0; i < n; ++i) grid[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / last);
  }
  // Endpoints are exact regardless of rounding in the step arithmetic.
  grid.front() = cfg.f_start_hz;
  grid.back() = cfg.f_stop_hz;
  for (std::size_t i = 1; i < n; ++i) {
    if (!(grid[i] > grid[i - 1])) throw Error(Errc::InvalidConfig, "sweep grid is not strictly increasing");
  }
  return grid;
}

std::string scenario_id(std::size_t index, const channel::Scenario& s) {
  return "s" + std::to_string(index) + "-" + std::string(channel::to_string(s.daq_mode)) + "-" +
         records::format_double(s.distance_cm) + "cm";
}

double detector_input_dbm(const frontend::RxFrontendModel& rx, double v_peak, double freq_hz) {
  return frontend::rx_power_dbm(v_peak, rx.r_in) + frontend::bandpass_gain_db(rx, freq_hz);
}

namespace {

SamplePoint evaluate(const CampaignInputs& in, std::size_t scenario_index, double freq_hz, double v_src,
                     std::size_t sample_index) {
  const auto& s = in.scenarios[scenario_index];
  const auto net = channel::build_channel(s, in.params, v_src);
  const auto sol = circuit::solve_ac(net, freq_hz);
  const double v_rx =
      std::abs(sol.voltage(channel::node::kRxSignal) - sol.voltage(channel::node::kRxGround));

  SamplePoint p;
  p.scenario = scenario_id(scenario_index, s);
  p.daq_mode = s.daq_mode;
  p.distance_cm = s.distance_cm;
  p.freq_hz = freq_hz;
  p.gain_db = v_rx == 0.0 ? -std::numeric_limits<double>::infinity() : 20.0 * std::log10(v_rx / v_src);
  p.rx_power_dbm = detector_input_dbm(in.rx, v_rx, freq_hz);
  p.detector_v = frontend::detector_voltage(in.rx, p.rx_power_dbm);
  if (in.sweep.dither) {
    std::seed_seq seq{static_cast<std::uint32_t>(in.seed), static_cast<std::uint32_t>(in.seed >> 32),
                      static_cast<std::uint32_t>(sample_index)};
    std::mt19937_64 rng(seq);
    const double half_lsb = 0.5 * in.rx.adc_vref / static_cast<double>(in.rx.adc_full_scale());
    p.detector_v += std::uniform_real_distribution<double>(-half_lsb, half_lsb)(rng);
  }
  p.adc_code = frontend::adc_quantize(in.rx, p.detector_v);
  return p;
}

}  // namespace

CampaignResult run_campaign(const CampaignInputs& inputs) {
  CampaignResult result;
  result.config = inputs;

  inputs.tx.validate();
  result.tx_power_dbm = tx_power_dbm(inputs.tx);
  if (const auto verdict = check_safety(result.tx_power_dbm, inputs.safety); !verdict) {
    throw Error(Errc::SafetyViolation, "tx power " + records::format_double(verdict.tx_power_dbm) +
                                           " dBm exceeds limit " + records::format_double(verdict.max_tx_dbm) + " dBm");
  }

  inputs.params.validate();
  inputs.rx.validate();
  const auto grid = frequency_grid(inputs.sweep);
  for (const auto& s : inputs.scenarios) {
    if (!(std::isfinite(s.distance_cm) && s.distance_cm > 0)) {
      throw Error(Errc::InvalidConfig, "scenario distance_cm must be > 0");
    }
  }
  if (grid.front() < frontend::kCarrierMinHz || grid.back() > frontend::kCarrierMaxHz) {
    throw Error(Errc::InvalidConfig, "sweep grid must stay within the 4..64 MHz carrier range");
  }
  if (inputs.scenarios.empty()) return result;

  const double v_src = frontend::square_fundamental_peak(inputs.tx.rail_v);
  const std::size_t total = inputs.scenarios.size() * grid.size();
  result.samples.resize(total);
  std::vector<std::exception_ptr> failures(total);

  unsigned workers = inputs.threads != 0 ? inputs.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
      const std::size_t si = i / grid.size();
      const double f = grid[i % grid.size()];
      try {
        result.samples[i] = evaluate(inputs, si, f, v_src, i);
      } catch (const Error& e) {
        failures[i] = std::make_exception_ptr(
            Error(e.code(), std::string(e.what()) + " [scenario " + scenario_id(si, inputs.scenarios[si]) +
                                ", freq_hz " + records::format_double(f) + "]"));
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return result;
}

}  // namespace hbc::campaign
