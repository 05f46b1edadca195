#include "hbc/channel.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "hbc/campaign.hpp"
#include "hbc/error.hpp"

using namespace hbc;
using namespace hbc::channel;

namespace {

const std::vector<double>& grid() {
  static const auto g = campaign::frequency_grid({});
  return g;
}

}  // namespace

TEST(CInt, InverseDistanceLaw) {
  EXPECT_NEAR(c_int_of_distance(10.0, 10e-12), 1e-12, 1e-24);
  EXPECT_NEAR(c_int_of_distance(50.0, 10e-12), 0.2e-12, 1e-24);
  for (double d : {1.0, 7.5, 30.0}) {
    EXPECT_DOUBLE_EQ(c_int_of_distance(d, 3e-14) / c_int_of_distance(2 * d, 3e-14), 2.0);
  }
  EXPECT_THROW(c_int_of_distance(0.0, 1e-12), Error);
  EXPECT_THROW(c_int_of_distance(10.0, -1e-12), Error);
  EXPECT_THROW(c_int_of_distance(-5.0, 1e-12), Error);
}

TEST(BuildChannel, CanonicalTopologySize) {
  const auto net = build_channel({DaqMode::Wireless, 30.0}, {}, 1.0);
  EXPECT_EQ(net.nodes().size(), 10u);  // 9 + earth
  EXPECT_EQ(net.elements().size(), 14u);
  EXPECT_NO_THROW(net.validate());
  const auto& src = net.voltage_source();
  EXPECT_EQ(src.a, node::kTxOut);
  EXPECT_EQ(src.b, node::kTxGround);
}

TEST(BuildChannel, ModeSwapChangesOnlyReturnCapacitor) {
  const ChannelParams p;
  const auto w = build_channel({DaqMode::Wireless, 30.0}, p, 1.0);
  const auto c = build_channel({DaqMode::Classical, 30.0}, p, 1.0);
  ASSERT_EQ(w.elements().size(), c.elements().size());
  int differing = 0;
  for (std::size_t i = 0; i < w.elements().size(); ++i) {
    if (w.elements()[i] == c.elements()[i]) continue;
    ++differing;
    EXPECT_EQ(c.elements()[i].label, kRxReturnLabel);
    EXPECT_EQ(std::get<circuit::Capacitor>(c.elements()[i].kind).farads, p.c_gr_classical);
    EXPECT_EQ(std::get<circuit::Capacitor>(w.elements()[i].kind).farads, p.c_gr_wireless);
  }
  EXPECT_EQ(differing, 1);
}

TEST(BuildChannel, Deterministic) {
  EXPECT_EQ(build_channel({DaqMode::Wireless, 12.0}, {}, 1.0), build_channel({DaqMode::Wireless, 12.0}, {}, 1.0));
}

TEST(BuildChannel, DistanceEntersBodyResistanceAndCoupling) {
  const ChannelParams p;
  const auto net = build_channel({DaqMode::Wireless, 50.0}, p, 1.0);
  EXPECT_DOUBLE_EQ(std::get<circuit::Resistor>(net.find("R_BODY")->kind).ohms, 150.0);
  EXPECT_DOUBLE_EQ(std::get<circuit::Capacitor>(net.find("C_INT")->kind).farads, p.k_int / 50.0);
}

TEST(BuildChannel, RejectsInvalidParams) {
  ChannelParams p;
  p.c_gt = 0.0;
  EXPECT_THROW(build_channel({DaqMode::Wireless, 30.0}, p, 1.0), Error);
  p = {};
  p.c_gr_classical = p.c_gr_wireless / 2;
  EXPECT_THROW(build_channel({DaqMode::Wireless, 30.0}, p, 1.0), Error);
  EXPECT_THROW(build_channel({DaqMode::Wireless, 0.0}, {}, 1.0), Error);
  EXPECT_THROW(build_channel({DaqMode::Wireless, 30.0}, {}, -1.0), Error);
}

TEST(ChannelGain, MatchesTransferGain) {
  const Scenario s{DaqMode::Classical, 30.0};
  const ChannelParams p;
  EXPECT_EQ(channel_gain_db(s, p, 20e6),
            circuit::transfer_gain_db(build_channel(s, p, 1.0), node::kRxSignal, node::kRxGround, 20e6));
  EXPECT_THROW(channel_gain_db(s, p, 0.0), Error);
}

TEST(ChannelGain, IndependentOfSourceAmplitude) {
  const Scenario s{DaqMode::Wireless, 10.0};
  for (double f : {4e6, 38e6, 64e6}) {
    const auto net = build_channel(s, {}, 2.1);
    EXPECT_NEAR(circuit::transfer_gain_db(net, node::kRxSignal, node::kRxGround, f), channel_gain_db(s, {}, f), 1e-9);
  }
}

TEST(ChannelGain, ClassicalNeverBelowWireless) {
  const ChannelParams p;
  for (double d : {10.0, 30.0, 50.0}) {
    for (double f : grid()) {
      EXPECT_GE(channel_gain_db({DaqMode::Classical, d}, p, f), channel_gain_db({DaqMode::Wireless, d}, p, f))
          << d << " cm " << f;
    }
  }
}

TEST(ChannelGain, NonIncreasingWithDistance) {
  const ChannelParams p;
  for (auto mode : {DaqMode::Classical, DaqMode::Wireless}) {
    for (double f : grid()) {
      double prev = INFINITY;
      for (double d = 5.0; d <= 100.0; d += 5.0) {
        const double g = channel_gain_db({mode, d}, p, f);
        EXPECT_LE(g, prev + 1e-12) << to_string(mode) << " " << d << " cm " << f;
        prev = g;
      }
    }
  }
}

TEST(ChannelGain, NonDecreasingInReturnCapacitance) {
  const ChannelParams base;
  for (double d : {10.0, 30.0, 50.0}) {
    for (double f : grid()) {
      double prev = -INFINITY;
      for (double e = -14.0; e <= -8.0; e += 0.25) {
        ChannelParams p = base;
        p.c_gr_wireless = std::pow(10.0, e);
        p.c_gr_classical = std::max(p.c_gr_classical, p.c_gr_wireless);
        const double g = channel_gain_db({DaqMode::Wireless, d}, p, f);
        EXPECT_GE(g, prev - 1e-12) << d << " cm " << f << " c_gr 1e" << e;
        prev = g;
      }
      ChannelParams big = base;
      big.c_gr_wireless *= 10;
      EXPECT_GE(channel_gain_db({DaqMode::Wireless, d}, big, f), channel_gain_db({DaqMode::Wireless, d}, base, f));
    }
  }
}

TEST(ChannelGain, WirelessTenCentimetresDominates) {
  const ChannelParams p;
  for (double f : grid()) {
    const double g10 = channel_gain_db({DaqMode::Wireless, 10.0}, p, f);
    EXPECT_GE(g10, channel_gain_db({DaqMode::Wireless, 30.0}, p, f));
    EXPECT_GE(g10, channel_gain_db({DaqMode::Wireless, 50.0}, p, f));
  }
}

TEST(ChannelParams, FieldTableCoversEveryMember) {
  // Every double member appears exactly once.
  EXPECT_EQ(sizeof(ChannelParams), kParamFields.size() * sizeof(double));
  ChannelParams p;
  for (std::size_t i = 0; i < kParamFields.size(); ++i) p.*kParamFields[i].member = static_cast<double>(i + 1);
  for (std::size_t i = 0; i < kParamFields.size(); ++i) EXPECT_EQ(p.*kParamFields[i].member, static_cast<double>(i + 1));
  EXPECT_TRUE(find_param("k_int").has_value());
  EXPECT_FALSE(find_param("k_int2").has_value());
}

TEST(DaqMode, TextRoundTrip) {
  for (auto m : {DaqMode::Classical, DaqMode::Wireless}) EXPECT_EQ(parse_daq_mode(to_string(m)), m);
  EXPECT_THROW(parse_daq_mode("wired"), Error);
}
