#include "ses/interactions.hpp"

#include <cmath>

#include "ses/equilibrium.hpp"
#include "ses/error.hpp"

namespace ses {

namespace {

double side_value(const EndpointSES& e, const ExchangeProposal& x, const char* name) {
  double num = x.energy;
  if (x.volume) {
    if (!e.pressure) fail(ErrorCode::InvalidArgument, std::string("pressure of ") + name + " missing");
    num += *e.pressure * *x.volume;
  }
  if (x.amount) {
    if (!e.potential)
      fail(ErrorCode::InvalidArgument, std::string("chemical potential of ") + name + " missing");
    num -= *e.potential * *x.amount;
  }
  return num / e.temperature;
}

bool within(double lo, double x, double hi) {
  const double tol = 1e-12 * std::max({std::fabs(lo), std::fabs(hi), std::fabs(x)});
  return lo - tol <= x && x <= hi + tol;
}

}  // namespace

TransferBounds transfer_bounds(const EndpointSES& a, const EndpointSES& b,
                               const ExchangeProposal& proposal) {
  if (a.temperature == 0.0 || b.temperature == 0.0 || !std::isfinite(a.temperature) ||
      !std::isfinite(b.temperature))
    fail(ErrorCode::ZeroTemperature, "endpoint temperatures must be nonzero and finite");
  TransferBounds t;
  t.lower = side_value(a, proposal, "A");
  t.upper = side_value(b, proposal, "B");
  t.admissible = within(t.lower, proposal.entropy, t.upper);

  if (proposal.volume && proposal.entropy == 0.0) {
    // (W + rest_A)/T_A <= 0 <= (W + rest_B)/T_B with rest = p dV - mu dn.
    ExchangeProposal zero = proposal;
    zero.energy = 0.0;
    const double rest_a = side_value(a, zero, "A") * a.temperature;
    const double rest_b = side_value(b, zero, "B") * b.temperature;
    Window w{-kInfinity, kInfinity};
    if (a.temperature > 0) w.hi = std::min(w.hi, -rest_a); else w.lo = std::max(w.lo, -rest_a);
    if (b.temperature > 0) w.lo = std::max(w.lo, -rest_b); else w.hi = std::min(w.hi, -rest_b);
    t.work_window = w;
  }
  return t;
}

Direction clausius_direction(const EndpointSES& a, const EndpointSES& b, double energy) {
  if (a.temperature == 0.0 || b.temperature == 0.0)
    fail(ErrorCode::ZeroTemperature, "endpoint temperatures must be nonzero");
  return (1.0 / a.temperature - 1.0 / b.temperature) * energy <= 0.0 ? Direction::allowed
                                                                     : Direction::forbidden;
}

FiniteBounds transfer_bounds_finite(const Spectrum& a, double energy_a, const Spectrum& b,
                                    double energy_b, double transfer) {
  FiniteBounds f;
  f.s_min = ses_entropy_of_energy(a, energy_a) - ses_entropy_of_energy(a, energy_a - transfer);
  f.s_max = ses_entropy_of_energy(b, energy_b + transfer) - ses_entropy_of_energy(b, energy_b);
  f.admissible = within(-kInfinity, f.s_min, f.s_max);
  return f;
}

NonequilibriumBounds transfer_bounds_nonequilibrium(const LevelDistribution& a,
                                                    const LevelDistribution& b, double transfer) {
  const Observables oa = observables(a, ses_entropy_oracle());
  const Observables ob = observables(b, ses_entropy_oracle());
  NonequilibriumBounds n;
  n.s_min = oa.entropy - ses_entropy_of_energy(*a.spectrum, oa.energy - transfer);
  n.s_max = ses_entropy_of_energy(*b.spectrum, ob.energy + transfer) - ob.entropy;
  n.admissible = within(-kInfinity, n.s_min, n.s_max);
  n.disequilibrium_a = oa.disequilibrium;
  n.disequilibrium_b = ob.disequilibrium;
  n.pure_entropy_window = {-oa.disequilibrium, ob.disequilibrium};
  return n;
}

double max_work_interposed(const EndpointSES& a, const EndpointSES& b, double energy_from_a,
                           std::optional<double> amount) {
  if (!(a.temperature > 0.0) || !(b.temperature > 0.0))
    fail(ErrorCode::TemperatureSign, "interposed machine needs positive temperatures");
  const double ratio = b.temperature / a.temperature;
  double w = (1.0 - ratio) * energy_from_a;
  if (amount) {
    if (!a.potential || !b.potential)
      fail(ErrorCode::InvalidArgument, "chemical potentials needed for an amount transfer");
    w += (*a.potential * ratio - *b.potential) * *amount;
  }
  return w;
}

HeatSplit measurable_heat_split(double temperature, double partial_enthalpy, double partial_entropy,
                                double energy, double amount, std::optional<double> volume,
                                std::optional<double> pressure) {
  if (!(temperature > 0.0)) fail(ErrorCode::NonPositiveTemperature, "temperature must be positive");
  HeatSplit h;
  h.heat = energy - partial_enthalpy * amount;
  if (volume) {
    if (!pressure) fail(ErrorCode::InvalidArgument, "pressure needed for a volume transfer");
    h.heat -= *pressure * *volume;
  }
  h.entropy = h.heat / temperature + partial_entropy * amount;
  return h;
}

namespace {

ClausiusCheck verdict(double lhs, double scale) {
  return {lhs, lhs >= -1e-12 * scale};
}

}  // namespace

ClausiusCheck clausius_cycle_check(const std::vector<HeatRecord>& records) {
  double lhs = 0.0, scale = 0.0;
  for (const auto& r : records) {
    if (!(r.temperature > 0.0))
      fail(ErrorCode::NonPositiveTemperature, "cycle temperatures must be positive");
    const double term = r.heat_out / r.temperature;
    lhs += term;
    scale += std::fabs(term);
  }
  return verdict(lhs, scale);
}

ClausiusCheck clausius_cycle_check(const std::vector<double>& times,
                                   const std::vector<std::vector<double>>& heat_rates,
                                   const std::vector<std::vector<double>>& temperatures) {
  if (heat_rates.size() != temperatures.size())
    fail(ErrorCode::LengthMismatch, "one temperature series per heat-rate series");
  std::vector<double> integrand(times.size(), 0.0);
  for (std::size_t j = 0; j < heat_rates.size(); ++j) {
    if (heat_rates[j].size() != times.size() || temperatures[j].size() != times.size())
      fail(ErrorCode::LengthMismatch, "series length differs from the time grid");
    for (std::size_t k = 0; k < times.size(); ++k) {
      if (!(temperatures[j][k] > 0.0))
        fail(ErrorCode::NonPositiveTemperature, "cycle temperatures must be positive");
      integrand[k] += heat_rates[j][k] / temperatures[j][k];
    }
  }
  double lhs = 0.0, scale = 0.0;
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double dt = times[k] - times[k - 1];
    const double term = 0.5 * dt * (integrand[k] + integrand[k - 1]);
    lhs += term;
    scale += 0.5 * std::fabs(dt) * (std::fabs(integrand[k]) + std::fabs(integrand[k - 1]));
  }
  return verdict(lhs, scale);
}

ConductionSigma conduction_sigma(double heat_flux, double conductivity, double temperature,
                                 double gradient) {
  if (!(conductivity > 0.0)) fail(ErrorCode::InvalidArgument, "conductivity must be positive");
  if (!(temperature > 0.0)) fail(ErrorCode::NonPositiveTemperature, "temperature must be positive");
  const double t2 = temperature * temperature;
  return {heat_flux * heat_flux / (conductivity * t2), conductivity * gradient * gradient / t2};
}

}  // namespace ses
