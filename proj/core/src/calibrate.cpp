#include "hbc/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "hbc/error.hpp"

namespace hbc::calibrate {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;
constexpr double kDiameterTol = 1e-6;
constexpr int kMaxRestarts = 2;
constexpr double kInitialStepFraction = 0.1;

using Point = std::vector<double>;

struct Vertex {
  Point x;
  double f;
};

double fold(double x, double lo, double hi) {
  if (x >= lo && x <= hi) return x;
  const double w = hi - lo;
  double t = std::fmod(x - lo, 2.0 * w);
  if (t < 0) t += 2.0 * w;
  return lo + (t <= w ? t : 2.0 * w - t);
}

class Problem {
 public:
  explicit Problem(const FitSpec& spec) : spec_(spec) {
    for (const auto& f : spec.free) members_.push_back(channel::find_param(f.name)->member);
  }

  std::size_t dims() const { return spec_.free.size(); }
  int evaluations() const { return evaluations_; }
  int failures() const { return failures_; }
  bool exhausted() const { return evaluations_ >= spec_.budget; }

  Point start() const {
    Point x;
    for (auto m : members_) x.push_back(std::log10(spec_.initial.*m));
    return x;
  }

  Point clamp(Point x) const {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = fold(x[i], spec_.free[i].lower_log10, spec_.free[i].upper_log10);
    return x;
  }

  double width(std::size_t i) const { return spec_.free[i].upper_log10 - spec_.free[i].lower_log10; }
  double lower(std::size_t i) const { return spec_.free[i].lower_log10; }
  double upper(std::size_t i) const { return spec_.free[i].upper_log10; }

  // The starting coordinates map back to the exact initial values.
  channel::ChannelParams params(const Point& x) const {
    auto p = spec_.initial;
    const Point x0 = start();
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] != x0[i]) p.*members_[i] = std::pow(10.0, x[i]);
    }
    return p;
  }

  double evaluate(const Point& x) {
    ++evaluations_;
    const double f = objective_rmse_db(params(x), spec_.measured);
    if (!std::isfinite(f)) ++failures_;
    return std::isnan(f) ? std::numeric_limits<double>::infinity() : f;
  }

 private:
  const FitSpec& spec_;
  std::vector<double channel::ChannelParams::*> members_;
  int evaluations_ = 0;
  int failures_ = 0;
};

double diameter(const std::vector<Vertex>& simplex) {
  double d = 0.0;
  for (std::size_t v = 1; v < simplex.size(); ++v) {
    for (std::size_t i = 0; i < simplex[v].x.size(); ++i) d = std::max(d, std::abs(simplex[v].x[i] - simplex[0].x[i]));
  }
  return d;
}

// Vertices x0 + s_i e_i; a step that would leave the box goes the other way.
std::vector<Point> axis_simplex(const Problem& prob, const Point& x0, const std::vector<double>& steps) {
  std::vector<Point> pts{x0};
  for (std::size_t i = 0; i < x0.size(); ++i) {
    Point x = x0;
    x[i] += steps[i];
    if (x[i] > prob.upper(i) || x[i] < prob.lower(i)) x[i] = x0[i] - steps[i];
    pts.push_back(prob.clamp(std::move(x)));
  }
  return pts;
}

Point affine(const Point& c, const Point& x, double t) {  // c + t (x - c)
  Point out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i] + t * (x[i] - c[i]);
  return out;
}

}  // namespace

void FitSpec::validate() const {
  std::set<std::string> seen;
  initial.validate();
  for (const auto& f : free) {
    const auto field = channel::find_param(f.name);
    if (!field) throw Error(Errc::InvalidArgument, "unknown free parameter '" + f.name + "'");
    if (!seen.insert(f.name).second) throw Error(Errc::InvalidArgument, "duplicate free parameter '" + f.name + "'");
    if (!std::isfinite(f.lower_log10) || !std::isfinite(f.upper_log10) || !(f.lower_log10 < f.upper_log10)) {
      throw Error(Errc::InvalidArgument, "bounds of '" + f.name + "' must be finite with lower < upper");
    }
    const double x = std::log10(initial.*(field->member));
    if (x < f.lower_log10 || x > f.upper_log10) {
      throw Error(Errc::InvalidArgument, "initial value of '" + f.name + "' is outside its bounds");
    }
  }
  if (budget < 0) throw Error(Errc::InvalidArgument, "budget must be >= 0");
  if (measured.empty()) throw Error(Errc::EmptyInput, "no measured curves");
  for (const auto& c : measured) c.validate();
}

FreeParam default_free_param(const std::string& name, const channel::ChannelParams& initial) {
  const auto field = channel::find_param(name);
  if (!field) throw Error(Errc::InvalidArgument, "unknown parameter '" + name + "'");
  const double x = std::log10(initial.*(field->member));
  return {name, x - 2.0, x + 2.0};
}

double objective_rmse_db(const channel::ChannelParams& p, const std::vector<analysis::GainCurve>& measured) {
  if (measured.empty()) throw Error(Errc::EmptyInput, "no measured curves");
  double sum = 0.0;
  std::size_t n = 0;
  try {
    for (const auto& curve : measured) {
      const channel::Scenario s{curve.daq_mode, curve.distance_cm};
      const auto net = channel::build_channel(s, p, 1.0);
      for (const auto& pt : curve.points) {
        const double model =
            circuit::transfer_gain_db(net, channel::node::kRxSignal, channel::node::kRxGround, pt.freq_hz);
        const double d = model - pt.gain_db;
        sum += d * d;
        ++n;
      }
    }
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
  if (n == 0) throw Error(Errc::EmptyInput, "measured curves have no points");
  return std::sqrt(sum / static_cast<double>(n));
}

FitResult fit(const FitSpec& spec) {
  spec.validate();
  Problem prob(spec);

  const Point x0 = prob.start();
  Vertex best{x0, prob.evaluate(x0)};

  auto result = [&](bool converged) {
    if (!std::isfinite(best.f)) {
      throw Error(Errc::AllEvaluationsFailed, std::to_string(prob.evaluations()) + " evaluations, none finite");
    }
    return FitResult{prob.params(best.x), best.f, prob.evaluations(), converged, prob.failures()};
  };

  const std::size_t n = prob.dims();
  if (n == 0) return result(true);
  if (spec.budget == 0) return result(false);

  std::mt19937_64 rng(spec.seed);
  std::vector<double> steps(n);
  for (std::size_t i = 0; i < n; ++i) steps[i] = kInitialStepFraction * prob.width(i);

  bool converged = false;
  double previous_best = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart <= kMaxRestarts && !prob.exhausted(); ++restart) {
    if (restart > 0) {
      std::uniform_real_distribution<double> scale(0.5, 1.5);
      std::bernoulli_distribution flip(0.5);
      for (std::size_t i = 0; i < n; ++i) {
        steps[i] = kInitialStepFraction * prob.width(i) * scale(rng) * (flip(rng) ? -1.0 : 1.0);
      }
    }

    std::vector<Vertex> simplex;
    const auto pts = axis_simplex(prob, best.x, steps);
    simplex.push_back(best);
    for (std::size_t v = 1; v < pts.size() && !prob.exhausted(); ++v) simplex.push_back({pts[v], prob.evaluate(pts[v])});
    if (simplex.size() < n + 1) break;

    auto order = [&] {
      std::stable_sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    };
    order();

    converged = false;
    while (!prob.exhausted()) {
      if (diameter(simplex) < kDiameterTol) {
        converged = true;
        break;
      }
      Point centroid(n, 0.0);
      for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[v].x[i] / static_cast<double>(n);
      }
      Vertex& worst = simplex[n];

      const Point xr = prob.clamp(affine(centroid, worst.x, -kReflect));
      const double fr = prob.evaluate(xr);
      if (fr < simplex[0].f) {
        if (prob.exhausted()) {
          worst = {xr, fr};
        } else {
          const Point xe = prob.clamp(affine(centroid, worst.x, -kReflect * kExpand));
          const double fe = prob.evaluate(xe);
          worst = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
        }
      } else if (fr < simplex[n - 1].f) {
        worst = {xr, fr};
      } else {
        if (prob.exhausted()) break;
        const bool outside = fr < worst.f;
        const Point xc = prob.clamp(outside ? affine(centroid, xr, kContract) : affine(centroid, worst.x, kContract));
        const double fc = prob.evaluate(xc);
        if (outside ? fc <= fr : fc < worst.f) {
          worst = {xc, fc};
        } else {
          for (std::size_t v = 1; v <= n && !prob.exhausted(); ++v) {
            simplex[v].x = prob.clamp(affine(simplex[0].x, simplex[v].x, kShrink));
            simplex[v].f = prob.evaluate(simplex[v].x);
          }
        }
      }
      order();
    }

    for (const auto& v : simplex) {
      if (v.f < best.f) best = v;
    }
    if (!converged) break;
    if (restart > 0 && previous_best - best.f <= 1e-12 * std::max(1.0, best.f)) break;
    previous_best = best.f;
  }
  return result(converged);
}

}  // namespace hbc::calibrate
