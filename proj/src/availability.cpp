#include "ses/availability.hpp"

#include <cmath>

#include "ses/equilibrium.hpp"
#include "ses/error.hpp"

namespace ses {

ExtensiveProperties ExtendedState::properties() const {
  return {state_energy(state), state_entropy(state), volume, amount};
}

double adiabatic_availability(const LevelDistribution& state) {
  const double e = state_energy(state);
  const double s = state_entropy(state);
  const Spectrum& spec = *state.spectrum;
  // Entropies at or above S_max (rounding) sit at the b = 0 point.
  const double s_max = max_entropy(spec);
  const double target = std::min(s, s_max);
  return e - ses_energy_of_entropy(spec, target, Branch::positive);
}

double ergotropy(const LevelDistribution& state) {
  return state_energy(state) - state_energy(passive_sort(state));
}

AvailableEnergy available_energy_split(const LevelDistribution& state, double reservoir_temperature) {
  if (!(reservoir_temperature > 0.0) || !std::isfinite(reservoir_temperature))
    fail(ErrorCode::NonPositiveTemperature, "reservoir temperature must be positive");
  const ThermalPoint r = thermal_properties(*state.spectrum, 1.0 / reservoir_temperature);
  AvailableEnergy out;
  out.reservoir_energy = r.energy;
  out.reservoir_entropy = r.entropy;
  out.energy_part = state_energy(state) - r.energy;
  out.entropy_part = reservoir_temperature * (r.entropy - state_entropy(state));
  out.omega = out.energy_part + out.entropy_part;
  return out;
}

double available_energy(const LevelDistribution& state, const Reservoir& reservoir) {
  if (reservoir.kind != ReservoirKind::fixed_Vn)
    fail(ErrorCode::KindMismatch, "available energy is defined here for fixed_Vn reservoirs");
  return available_energy_split(state, reservoir.temperature).omega;
}

double availability_function(const ExtensiveProperties& x, const Reservoir& reservoir) {
  if (!(reservoir.temperature > 0.0))
    fail(ErrorCode::NonPositiveTemperature, "reservoir temperature must be positive");
  const bool needs_p =
      reservoir.kind == ReservoirKind::variable_V || reservoir.kind == ReservoirKind::variable_Vn;
  const bool needs_mu =
      reservoir.kind == ReservoirKind::variable_n || reservoir.kind == ReservoirKind::variable_Vn;
  if (needs_p && !reservoir.pressure) fail(ErrorCode::KindFieldMissing, "reservoir pressure missing");
  if (needs_mu && !reservoir.potential)
    fail(ErrorCode::KindFieldMissing, "reservoir chemical potential missing");
  double a = x.energy - reservoir.temperature * x.entropy;
  if (needs_p) a += *reservoir.pressure * x.volume;
  if (needs_mu) a -= *reservoir.potential * x.amount;
  return a;
}

OptimalWork optimal_work(const ExtensiveProperties& x1, const ExtensiveProperties& x2,
                         const Reservoir& reservoir, std::optional<double> entropy_generated) {
  auto differs = [](double a, double b) {
    return std::fabs(a - b) > 1e-12 * std::max({1.0, std::fabs(a), std::fabs(b)});
  };
  const bool v_free =
      reservoir.kind == ReservoirKind::variable_V || reservoir.kind == ReservoirKind::variable_Vn;
  const bool n_free =
      reservoir.kind == ReservoirKind::variable_n || reservoir.kind == ReservoirKind::variable_Vn;
  if (differs(x1.volume, x2.volume) && !v_free)
    fail(ErrorCode::KindMismatch, "volume changes but the reservoir kind fixes it");
  if (differs(x1.amount, x2.amount) && !n_free)
    fail(ErrorCode::KindMismatch, "amount changes but the reservoir kind fixes it");
  OptimalWork w;
  w.reversible = availability_function(x1, reservoir) - availability_function(x2, reservoir);
  if (entropy_generated) {
    if (*entropy_generated < 0.0) fail(ErrorCode::InvalidArgument, "entropy generation is negative");
    w.actual = w.reversible - reservoir.temperature * *entropy_generated;
  }
  return w;
}

SinkRequirements sink_requirements(double t_a, double t_b, double energy_out, double entropy_irr) {
  if (!(t_b > 0.0) || !(t_a > t_b))
    fail(ErrorCode::TemperatureOrder, "sink requirements need T_A > T_B > 0");
  if (!(energy_out > 0.0)) fail(ErrorCode::InvalidArgument, "extracted energy must be positive");
  if (!(entropy_irr >= 0.0)) fail(ErrorCode::InvalidArgument, "entropy generation is negative");
  SinkRequirements r;
  r.min_entropy_out = energy_out / t_a + entropy_irr;
  r.min_sink_energy = (t_b / t_a) * energy_out + t_b * entropy_irr;
  r.carnot_fraction = 1.0 - t_b / t_a;
  return r;
}

}  // namespace ses
