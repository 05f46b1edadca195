#include "hbc/channel.hpp"

#include <cmath>

#include "hbc/error.hpp"

namespace hbc::channel {

std::string_view to_string(DaqMode mode) noexcept {
  return mode == DaqMode::Classical ? "classical" : "wireless";
}

DaqMode parse_daq_mode(std::string_view text) {
  if (text == "classical") return DaqMode::Classical;
  if (text == "wireless") return DaqMode::Wireless;
  throw Error(Errc::InvalidArgument, "unknown DAQ mode '" + std::string(text) + "'");
}

void ChannelParams::validate() const {
  for (const auto& f : kParamFields) {
    const double v = this->*f.member;
    if (!(std::isfinite(v) && v > 0)) {
      throw Error(Errc::InvalidArgument, "channel parameter '" + std::string(f.name) + "' must be finite and > 0");
    }
  }
  if (c_gr_classical < c_gr_wireless) {
    throw Error(Errc::InvalidArgument, "c_gr_classical must be >= c_gr_wireless");
  }
}

std::optional<ParamField> find_param(std::string_view name) noexcept {
  for (const auto& f : kParamFields) {
    if (f.name == name) return f;
  }
  return std::nullopt;
}

double c_int_of_distance(double distance_cm, double k_int) {
  if (!(distance_cm > 0) || !(k_int > 0) || !std::isfinite(distance_cm) || !std::isfinite(k_int)) {
    throw Error(Errc::InvalidArgument, "distance and k_int must be finite and > 0");
  }
  return k_int / distance_cm;
}

double r_body_of_distance(const ChannelParams& p, double distance_cm) {
  return p.r_body_base + p.r_body_per_cm * distance_cm;
}

circuit::Netlist build_channel(const Scenario& s, const ChannelParams& p, double v_src) {
  if (!(std::isfinite(s.distance_cm) && s.distance_cm > 0)) {
    throw Error(Errc::InvalidArgument, "distance_cm must be finite and > 0");
  }
  p.validate();
  if (!(std::isfinite(v_src) && v_src >= 0)) throw Error(Errc::InvalidArgument, "source amplitude must be >= 0");

  using namespace node;
  const auto& E = circuit::kEarth;
  const double c_gr = s.daq_mode == DaqMode::Classical ? p.c_gr_classical : p.c_gr_wireless;

  circuit::Netlist net;
  for (const auto* n : {&kTxGround, &kTxOut, &kTxElectrode, &kTxSkin, &kBodyTx, &kBodyRx, &kRxSkin,
                        &kRxSignal, &kRxGround}) {
    net.add_node(*n);
  }
  net.source(kTxOut, kTxGround, v_src, "V_TX")
      .resistor(kTxOut, kTxElectrode, p.r_out, "R_OUT")
      .capacitor(kTxElectrode, kTxSkin, p.c_electrode_tx, "C_ETX")
      .resistor(kTxSkin, kBodyTx, p.r_skin_tx, "R_SKIN_TX")
      .resistor(kBodyTx, kBodyRx, r_body_of_distance(p, s.distance_cm), "R_BODY")
      .capacitor(kBodyTx, E, p.c_body_gnd, "C_BODY_TX")
      .capacitor(kBodyRx, E, p.c_body_gnd, "C_BODY_RX")
      .resistor(kBodyRx, kRxSkin, p.r_skin_rx, "R_SKIN_RX")
      .capacitor(kRxSkin, kRxSignal, p.c_electrode_rx, "C_ERX")
      .resistor(kRxSignal, kRxGround, p.r_in, "R_IN")
      .capacitor(kRxSignal, kRxGround, p.c_in, "C_IN")
      .capacitor(kTxGround, E, p.c_gt, "C_GT")
      .capacitor(kRxGround, E, c_gr, std::string(kRxReturnLabel))
      .capacitor(kTxGround, kRxGround, c_int_of_distance(s.distance_cm, p.k_int), "C_INT");
  return net;
}

double channel_gain_db(const Scenario& s, const ChannelParams& p, double freq_hz) {
  if (!(std::isfinite(freq_hz) && freq_hz > 0)) throw Error(Errc::InvalidArgument, "frequency must be > 0");
  return circuit::transfer_gain_db(build_channel(s, p, 1.0), node::kRxSignal, node::kRxGround, freq_hz);
}

}  // namespace hbc::channel
