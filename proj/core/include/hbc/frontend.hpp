#pragma once

#include <cstdint>

namespace hbc::frontend {

inline constexpr double kCarrierMinHz = 4e6;
inline constexpr double kCarrierMaxHz = 64e6;
inline constexpr double kDetectorDynamicRangeDb = 92.0;

/// Rectangular-carrier transmitter driving the Tx electrode.
struct TxModel {
  double rail_v = 3.3;
  double carrier_hz = 4e6;
  /// Load used to express the fundamental as a power for the safety gate.
  double ref_load_ohm = 1100.0;

  bool operator==(const TxModel&) const = default;
  void validate() const;
};

/// Band-pass filter, log detector and ADC of the receiver.
struct RxFrontendModel {
  double f_low_hz = 160.0;
  double f_high_hz = 70e6;
  double det_slope_v_per_db = 0.025;
  double det_intercept_dbm = -84.0;
  double dynamic_range_db = kDetectorDynamicRangeDb;
  int adc_bits = 12;
  double adc_vref = 2.7;
  double r_in = 1100.0;

  bool operator==(const RxFrontendModel&) const = default;
  void validate() const;

  std::int64_t adc_full_scale() const noexcept { return (std::int64_t{1} << adc_bits) - 1; }
  /// One ADC step expressed in detector-input dB.
  double lsb_db() const noexcept;
};

/// Peak amplitude of the fundamental of a 0..rail, 50 % duty square wave: 2*rail/pi.
double square_fundamental_peak(double rail_v);

/// Average power of a sinusoid of peak `v_amplitude` into `r_in`, in dBm.
/// Returns -infinity for a zero amplitude.
double rx_power_dbm(double v_amplitude, double r_in);

/// First-order high-pass at f_low cascaded with first-order low-pass at f_high.
double bandpass_gain_db(const RxFrontendModel& m, double freq_hz);

/// Log-detector output, clamped to the dynamic-range window above the intercept.
double detector_voltage(const RxFrontendModel& m, double p_in_dbm);

/// round(clamp(v, 0, vref) / vref * (2^bits - 1)), ties away from zero.
std::int64_t adc_quantize(const RxFrontendModel& m, double v);

/// Inverse of the chain; throws CodeOutOfRange outside [0, 2^bits - 1].
double code_to_dbm(const RxFrontendModel& m, std::int64_t code);

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

}  // namespace hbc::frontend
