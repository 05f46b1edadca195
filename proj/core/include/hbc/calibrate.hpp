#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hbc/analysis.hpp"
#include "hbc/channel.hpp"

namespace hbc::calibrate {

struct FreeParam {
  std::string name;       // a ChannelParams field
  double lower_log10;
  double upper_log10;
};

struct FitSpec {
  std::vector<FreeParam> free;
  channel::ChannelParams initial;
  int budget = 2000;
  std::uint64_t seed = 0;
  std::vector<analysis::GainCurve> measured;

  /// Throws InvalidArgument on unknown names, duplicate names, non-finite or
  /// inverted bounds, or an initial value outside its bounds.
  void validate() const;
};

struct FitResult {
  channel::ChannelParams params;
  double rmse_db = 0.0;
  int evaluations = 0;
  bool converged = false;
  /// Objective evaluations rejected because the solver failed.
  int failed_evaluations = 0;
};

/// sqrt(mean squared (model - measured)) over every point of every curve.
/// Solver failures yield +infinity.
double objective_rmse_db(const channel::ChannelParams& p,
                         const std::vector<analysis::GainCurve>& measured);

/// Nelder-Mead in log10 parameter space with bounds enforced by reflection.
///
/// Stops when the budget is spent or the simplex diameter falls below 1e-6
/// decades. On convergence with budget left, the simplex is restarted around the
/// best point with seeded jitter (at most twice). Returns the best point seen;
/// throws AllEvaluationsFailed if no evaluation produced a finite objective.
FitResult fit(const FitSpec& spec);

/// Default bounds for a free parameter: its initial value +-2 decades.
FreeParam default_free_param(const std::string& name, const channel::ChannelParams& initial);

}  // namespace hbc::calibrate
