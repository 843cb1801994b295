#pragma once

#include <optional>

#include "ses/states.hpp"

namespace ses {

enum class ReservoirKind { fixed_Vn, variable_V, variable_n, variable_Vn };

struct Reservoir {
  double temperature = 1.0;  // k_B T_R, must be > 0
  std::optional<double> pressure;
  std::optional<double> potential;
  ReservoirKind kind = ReservoirKind::fixed_Vn;

  static Reservoir thermal(double temperature) { return {temperature, {}, {}, ReservoirKind::fixed_Vn}; }
};

// (E, S, V, n) of an extended state; V and n only matter for the variable kinds.
struct ExtensiveProperties {
  double energy = 0.0;
  double entropy = 0.0;
  double volume = 0.0;
  double amount = 0.0;
};

struct ExtendedState {
  LevelDistribution state;
  double volume = 1.0;
  double amount = 0.0;

  ExtensiveProperties properties() const;
};

// E - E_ses(S) on the positive-temperature branch.
double adiabatic_availability(const LevelDistribution& state);
double ergotropy(const LevelDistribution& state);

// Available energy with respect to a thermal reservoir, split into the
// energy part (E - E_R) and the entropy part T_R (S_R - S).
struct AvailableEnergy {
  double reservoir_energy = 0.0;   // E_R
  double reservoir_entropy = 0.0;  // S_R
  double energy_part = 0.0;
  double entropy_part = 0.0;
  double omega = 0.0;
};

AvailableEnergy available_energy_split(const LevelDistribution& state, double reservoir_temperature);
double available_energy(const LevelDistribution& state, const Reservoir& reservoir);

// Gamma / Phi / Upsilon / Xi according to reservoir.kind. Throws KindFieldMissing.
double availability_function(const ExtensiveProperties& x, const Reservoir& reservoir);

struct OptimalWork {
  double reversible = 0.0;
  std::optional<double> actual;  // reversible - T_R S_gen when S_gen is given
};

// Throws KindMismatch when V or n differ but the reservoir kind cannot exchange them.
OptimalWork optimal_work(const ExtensiveProperties& x1, const ExtensiveProperties& x2,
                         const Reservoir& reservoir, std::optional<double> entropy_generated = {});

struct SinkRequirements {
  double min_entropy_out = 0.0;
  double min_sink_energy = 0.0;
  double carnot_fraction = 0.0;
};

// Throws TemperatureOrder unless T_A > T_B > 0.
SinkRequirements sink_requirements(double t_a, double t_b, double energy_out, double entropy_irr);

}  // namespace ses
