#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "hbc/circuit.hpp"

namespace hbc::channel {

enum class DaqMode { Classical, Wireless };

std::string_view to_string(DaqMode mode) noexcept;
/// Accepts "classical" / "wireless"; throws InvalidArgument otherwise.
DaqMode parse_daq_mode(std::string_view text);

struct Scenario {
  DaqMode daq_mode = DaqMode::Wireless;
  double distance_cm = 30.0;

  bool operator==(const Scenario&) const = default;
};

/// Physical values of the lumped body-channel model.
///
/// Defaults are order-of-magnitude values for a wrist-worn Tx/Rx pair with wet-gel
/// Ag/AgCl electrodes. They are calibration starting points, not measurements.
struct ChannelParams {
  double r_out = 1.0;                 // Tx driver output resistance [ohm]
  double c_electrode_tx = 100e-9;     // electrode-skin coupling [F]
  double c_electrode_rx = 100e-9;
  double r_skin_tx = 500.0;           // electrode-skin series resistance [ohm]
  double r_skin_rx = 500.0;
  double r_body_base = 50.0;          // forward path: r_body_base + r_body_per_cm * d
  double r_body_per_cm = 2.0;         // [ohm/cm]
  double c_body_gnd = 75e-12;         // body-to-earth, at each body node [F]
  double c_gt = 1e-12;                // Tx floating ground to earth [F]
  double c_gr_wireless = 0.2e-12;     // Rx floating ground to earth, battery powered [F]
  double c_gr_classical = 1e-9;       // Rx ground to earth through USB + grid-powered host [F]
  double k_int = 0.03e-12;            // inter-device coupling, C_INT(d) = k_int / d [F*cm]
  double r_in = 1100.0;               // Rx input resistance [ohm]
  double c_in = 1.4e-12;              // Rx input capacitance [F]

  bool operator==(const ChannelParams&) const = default;

  /// Throws InvalidArgument when a value is non-finite or non-positive, or when
  /// c_gr_classical < c_gr_wireless.
  void validate() const;
};

struct ParamField {
  std::string_view name;
  double ChannelParams::*member;
};

/// Name <-> member table used by config parsing and calibration.
inline constexpr std::array<ParamField, 14> kParamFields{{
    {"r_out", &ChannelParams::r_out},
    {"c_electrode_tx", &ChannelParams::c_electrode_tx},
    {"c_electrode_rx", &ChannelParams::c_electrode_rx},
    {"r_skin_tx", &ChannelParams::r_skin_tx},
    {"r_skin_rx", &ChannelParams::r_skin_rx},
    {"r_body_base", &ChannelParams::r_body_base},
    {"r_body_per_cm", &ChannelParams::r_body_per_cm},
    {"c_body_gnd", &ChannelParams::c_body_gnd},
    {"c_gt", &ChannelParams::c_gt},
    {"c_gr_wireless", &ChannelParams::c_gr_wireless},
    {"c_gr_classical", &ChannelParams::c_gr_classical},
    {"k_int", &ChannelParams::k_int},
    {"r_in", &ChannelParams::r_in},
    {"c_in", &ChannelParams::c_in},
}};

std::optional<ParamField> find_param(std::string_view name) noexcept;

// Node names of the canonical topology.
namespace node {
inline const circuit::NodeId kTxGround = "GT";
inline const circuit::NodeId kTxOut = "TXo";
inline const circuit::NodeId kTxElectrode = "TE";
inline const circuit::NodeId kTxSkin = "TEi";
inline const circuit::NodeId kBodyTx = "BT";
inline const circuit::NodeId kBodyRx = "BR";
inline const circuit::NodeId kRxSkin = "REi";
inline const circuit::NodeId kRxSignal = "SR";
inline const circuit::NodeId kRxGround = "GR";
}  // namespace node

/// Label of the Rx-ground-to-earth capacitor, the only element that differs
/// between DAQ modes.
inline constexpr std::string_view kRxReturnLabel = "C_GR";

/// C_INT(d) = k_int / d. Throws InvalidArgument unless both inputs are positive.
double c_int_of_distance(double distance_cm, double k_int);

double r_body_of_distance(const ChannelParams& p, double distance_cm);

/// Builds the equivalent circuit:
///
///   GT -[V]- TXo -R_out- TE -C_etx- TEi -R_skin- BT -R_body(d)- BR -R_skin- REi -C_erx- SR
///   BT, BR -C_body- E        SR -(R_in || C_in)- GR
///   GT -C_GT- E              GR -C_GR(mode)- E          GT -C_INT(d)- GR
///
/// The received signal is the differential voltage SR - GR.
circuit::Netlist build_channel(const Scenario& s, const ChannelParams& p, double v_src);

/// Channel gain in dB at `freq_hz` (> 0), probing (SR, GR) with a 1 V source.
double channel_gain_db(const Scenario& s, const ChannelParams& p, double freq_hz);

}  // namespace hbc::channel
