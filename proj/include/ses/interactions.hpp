#pragma once

#include <optional>
#include <vector>

#include "ses/states.hpp"

namespace ses {

// Stable-equilibrium end of an interaction; temperature may be negative.
struct EndpointSES {
  double temperature = 1.0;
  std::optional<double> pressure;
  std::optional<double> potential;
};

// Transfers counted positive from A to B.
struct ExchangeProposal {
  double energy = 0.0;
  double entropy = 0.0;
  std::optional<double> volume;
  std::optional<double> amount;
};

struct Window {
  double lo = 0.0;
  double hi = 0.0;
  bool empty() const { return lo > hi; }
};

struct TransferBounds {
  double lower = 0.0;  // from A's side
  double upper = 0.0;  // from B's side
  bool admissible = false;
  // Energy transfers compatible with dS = 0 (a work interaction) when the
  // proposal carries a volume transfer.
  std::optional<Window> work_window;
};

// lower = (dE + p_A dV - mu_A dn)/T_A <= dS <= (dE + p_B dV - mu_B dn)/T_B.
// The chain holds as written for either sign of dE or T; an empty interval
// (lower > upper) means no transfer with this energy is possible.
TransferBounds transfer_bounds(const EndpointSES& a, const EndpointSES& b,
                               const ExchangeProposal& proposal);

enum class Direction { allowed, forbidden };
Direction clausius_direction(const EndpointSES& a, const EndpointSES& b, double energy);

struct FiniteBounds {
  double s_min = 0.0;
  double s_max = 0.0;
  bool admissible = false;
};

// Finite transfer E from A (at energy E_a) to B (at E_b), both in stable equilibrium.
FiniteBounds transfer_bounds_finite(const Spectrum& a, double energy_a, const Spectrum& b,
                                    double energy_b, double transfer);

struct NonequilibriumBounds {
  double s_min = 0.0;
  double s_max = 0.0;
  bool admissible = false;
  double disequilibrium_a = 0.0;
  double disequilibrium_b = 0.0;
  // Entropy transfers possible with zero energy transfer: [-D_a, D_b].
  Window pure_entropy_window;
};

NonequilibriumBounds transfer_bounds_nonequilibrium(const LevelDistribution& a,
                                                    const LevelDistribution& b, double transfer);

// Carnot-type maximum work of a machine interposed between A and B.
// Throws TemperatureSign unless both temperatures are positive.
double max_work_interposed(const EndpointSES& a, const EndpointSES& b, double energy_from_a,
                           std::optional<double> amount = {});

struct HeatSplit {
  double heat = 0.0;
  double entropy = 0.0;
};

HeatSplit measurable_heat_split(double temperature, double partial_enthalpy, double partial_entropy,
                                double energy, double amount, std::optional<double> volume = {},
                                std::optional<double> pressure = {});

struct HeatRecord {
  double heat_out = 0.0;
  double temperature = 1.0;
};

struct ClausiusCheck {
  double lhs = 0.0;
  bool satisfied = false;
};

ClausiusCheck clausius_cycle_check(const std::vector<HeatRecord>& records);

// Sampled rates: times t_k, and for each boundary j the heat-out rate and
// temperature at every t_k. Trapezoidal quadrature.
ClausiusCheck clausius_cycle_check(const std::vector<double>& times,
                                   const std::vector<std::vector<double>>& heat_rates,
                                   const std::vector<std::vector<double>>& temperatures);

struct ConductionSigma {
  double from_flux = 0.0;
  double from_gradient = 0.0;
};

ConductionSigma conduction_sigma(double heat_flux, double conductivity, double temperature,
                                 double gradient);

}  // namespace ses
