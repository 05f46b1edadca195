#include "hbc/frontend.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hbc/error.hpp"

namespace hbc::frontend {

namespace {
[[noreturn]] void bad(const std::string& msg) { throw Error(Errc::InvalidArgument, msg); }
}  // namespace

void TxModel::validate() const {
  if (!(std::isfinite(rail_v) && rail_v > 0)) bad("tx rail_v must be > 0");
  if (!(carrier_hz >= kCarrierMinHz && carrier_hz <= kCarrierMaxHz)) bad("tx carrier_hz must lie in [4 MHz, 64 MHz]");
  if (!(std::isfinite(ref_load_ohm) && ref_load_ohm > 0)) bad("tx ref_load_ohm must be > 0");
}

void RxFrontendModel::validate() const {
  if (!(std::isfinite(f_low_hz) && f_low_hz > 0 && std::isfinite(f_high_hz) && f_low_hz < f_high_hz)) {
    bad("rx band-pass corners must satisfy 0 < f_low_hz < f_high_hz");
  }
  if (!(std::isfinite(det_slope_v_per_db) && det_slope_v_per_db > 0)) bad("rx det_slope_v_per_db must be > 0");
  if (!std::isfinite(det_intercept_dbm)) bad("rx det_intercept_dbm must be finite");
  if (dynamic_range_db != kDetectorDynamicRangeDb) bad("rx dynamic_range_db is fixed at 92");
  if (adc_bits < 2 || adc_bits > 16) bad("rx adc_bits must lie in [2, 16]");
  if (!(std::isfinite(adc_vref) && adc_vref > 0)) bad("rx adc_vref must be > 0");
  if (!(std::isfinite(r_in) && r_in > 0)) bad("rx r_in must be > 0");
}

double RxFrontendModel::lsb_db() const noexcept {
  return adc_vref / static_cast<double>(adc_full_scale()) / det_slope_v_per_db;
}

double square_fundamental_peak(double rail_v) {
  if (!(rail_v >= 0) || !std::isfinite(rail_v)) bad("rail voltage must be finite and >= 0");
  return 2.0 * rail_v / std::numbers::pi;
}

double rx_power_dbm(double v_amplitude, double r_in) {
  if (!(r_in > 0) || !std::isfinite(r_in)) bad("resistance must be finite and > 0");
  if (!(v_amplitude >= 0) || !std::isfinite(v_amplitude)) bad("amplitude must be finite and >= 0");
  if (v_amplitude == 0.0) return -std::numeric_limits<double>::infinity();
  const double watts = v_amplitude * v_amplitude / (2.0 * r_in);
  return watts_to_dbm(watts);
}

double bandpass_gain_db(const RxFrontendModel& m, double freq_hz) {
  if (!(freq_hz > 0) || !std::isfinite(freq_hz)) bad("frequency must be finite and > 0");
  const double x = freq_hz / m.f_low_hz;
  const double y = freq_hz / m.f_high_hz;
  const double mag = x / std::sqrt(1.0 + x * x) / std::sqrt(1.0 + y * y);
  return 20.0 * std::log10(mag);
}

double detector_voltage(const RxFrontendModel& m, double p_in_dbm) {
  // NaN input falls to the floor; clamping is the whole contract.
  const double lo = m.det_intercept_dbm;
  const double hi = m.det_intercept_dbm + m.dynamic_range_db;
  const double p = std::isnan(p_in_dbm) ? lo : std::clamp(p_in_dbm, lo, hi);
  return m.det_slope_v_per_db * (p - lo);
}

std::int64_t adc_quantize(const RxFrontendModel& m, double v) {
  const double clamped = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, m.adc_vref);
  // std::llround rounds half away from zero.
  return std::llround(clamped / m.adc_vref * static_cast<double>(m.adc_full_scale()));
}

double code_to_dbm(const RxFrontendModel& m, std::int64_t code) {
  if (code < 0 || code > m.adc_full_scale()) {
    throw Error(Errc::CodeOutOfRange, "ADC code " + std::to_string(code) + " outside [0, " +
                                          std::to_string(m.adc_full_scale()) + "]");
  }
  const double v = static_cast<double>(code) / static_cast<double>(m.adc_full_scale()) * m.adc_vref;
  return v / m.det_slope_v_per_db + m.det_intercept_dbm;
}

double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts / 1e-3); }

}  // namespace hbc::frontend
