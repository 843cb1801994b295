#include "ses/diagram.hpp"

#include <cmath>

#include "ses/availability.hpp"
#include "ses/equilibrium.hpp"
#include "ses/error.hpp"

namespace ses {

namespace {

CurvePoint point_at(const CanonicalModel& model, double b) {
  const CanonicalSummary s = model.summary(b);
  return {s.entropy, s.energy, b, 1.0 / b};
}

// b values on [lo, hi], log-uniform with twice the density at the hi end.
std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> out;
  const double ul = std::log(lo), uh = std::log(hi);
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 1.0 : double(i) / (count - 1);
    out.push_back(std::exp(ul + (uh - ul) * (t - 0.25 * t * t) / 0.75));
  }
  return out;
}

// Largest b worth sampling: where the distance to the end point has shrunk
// by 1e-10 relative to its value at lo.
double far_beta(const CanonicalModel& model, double lo, bool negative) {
  auto distance = [&](double u) {
    const CanonicalSummary s = model.summary(negative ? -u : u);
    return negative ? s.deficit : s.excess;
  };
  const double ref = distance(lo);
  double hi = 2.0 * lo;
  for (int i = 0; i < 2000 && distance(hi) > 1e-10 * ref; ++i) hi *= 1.5;
  return hi;
}

}  // namespace

ESCurve ses_curve(const CanonicalModel& model, int n_points, bool include_negative) {
  if (n_points < 16) fail(ErrorCode::InvalidArgument, "curve needs at least 16 points");
  if (include_negative && !model.bounded())
    fail(ErrorCode::NegativeBranchUnavailable, "negative branch needs a bounded spectrum");

  ESCurve curve;
  curve.includes_negative = include_negative;
  const double lo = model.bounded() ? 1e-3 / model.span() : model.min_beta();
  const int fixed = 1 + (model.bounded() ? 1 : 0) + (include_negative ? 1 : 0);
  const int free_points = n_points - fixed;
  const int positive = include_negative ? (free_points + 1) / 2 : free_points;
  const int negative = include_negative ? free_points - positive : 0;

  curve.points.push_back({model.log_ground_degeneracy(), model.ground_energy(), kInfinity, 0.0});
  std::vector<double> pos = log_grid(lo, far_beta(model, lo, false), positive);
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) curve.points.push_back(point_at(model, *it));
  if (model.bounded()) curve.points.push_back(point_at(model, 0.0));
  if (include_negative) {
    for (double b : log_grid(lo, far_beta(model, lo, true), negative))
      curve.points.push_back(point_at(model, -b));
    curve.points.push_back({model.log_top_degeneracy(), model.top_energy(), -kInfinity, -0.0});
  }
  return curve;
}

Annotation annotate(const LevelDistribution& state, std::optional<double> reservoir_temperature) {
  Annotation a;
  a.energy = state_energy(state);
  a.entropy = state_entropy(state);
  a.psi = adiabatic_availability(state);
  a.ses_energy_at_entropy = a.energy - a.psi;
  if (reservoir_temperature) {
    const AvailableEnergy split = available_energy_split(state, *reservoir_temperature);
    a.reservoir_temperature = reservoir_temperature;
    a.reservoir_energy = split.reservoir_energy;
    a.reservoir_entropy = split.reservoir_entropy;
    a.energy_part = split.energy_part;
    a.entropy_part = split.entropy_part;
    a.omega = split.omega;
  }
  return a;
}

}  // namespace ses
