#pragma once

#include <string>
#include <vector>

#include "hbc/analysis.hpp"

namespace hbc::svg {

inline constexpr int kWidth = 800;
inline constexpr int kHeight = 500;

/// Line chart of gain (dB) over frequency (MHz): one polyline per curve, solid for
/// classical and dashed for wireless. Output is a pure function of the input;
/// coordinates are printed with two decimals.
std::string render_gain_chart(const std::vector<analysis::GainCurve>& curves,
                              const std::string& title = "Channel gain");

}  // namespace hbc::svg
