#pragma once

#include <memory>

#include "ses/spectra.hpp"
#include "ses/states.hpp"

namespace ses {

// b = 1/(k_B T). Energies exactly at the ground (top) of a spectrum have no
// finite b; they are reported through limit instead of an infinite value.
struct InverseTemperature {
  enum class Limit { finite, ground, top };

  double value = 0.0;
  Limit limit = Limit::finite;

  static InverseTemperature ground() { return {kInfinity, Limit::ground}; }
  static InverseTemperature top() { return {-kInfinity, Limit::top}; }

  bool is_finite() const { return limit == Limit::finite; }
  double temperature() const;  // +-inf at b = 0, 0 at the limits
};

struct ThermalPoint {
  double b = 0.0;
  double log_partition = 0.0;
  double energy = 0.0;
  double entropy = 0.0;
  double variance = 0.0;
  double heat_capacity = 0.0;

  double temperature() const { return 1.0 / b; }
};

enum class Branch { positive, negative };

double log_partition(const CanonicalModel& model, double b);
ThermalPoint thermal_properties(const CanonicalModel& model, double b);
LevelDistribution canonical_state(std::shared_ptr<const Spectrum> spectrum, double b);

// Inverts E(b). Throws EnergyOutOfRange outside [ground, top] (or past the
// certified temperature range of a truncated spectrum).
InverseTemperature beta_of_energy(const CanonicalModel& model, double energy);
// Same inversion addressed by the distance from the ground (excess > 0) or
// from the top (deficit > 0); these keep full precision deep in the tails.
InverseTemperature beta_of_excess(const CanonicalModel& model, double excess);
InverseTemperature beta_of_deficit(const CanonicalModel& model, double deficit);

// Maximum entropy compatible with the energy (the stable-equilibrium entropy).
double ses_entropy_of_energy(const CanonicalModel& model, double energy);
SesEntropyOfEnergy ses_entropy_oracle();

// b of the stable-equilibrium state with entropy S on the given branch.
// Entropies below ln(g_ground) (positive) or ln(g_top) (negative) map to the
// corresponding end point.
InverseTemperature beta_of_entropy(const CanonicalModel& model, double entropy, Branch branch);
double ses_energy_of_entropy(const CanonicalModel& model, double entropy,
                             Branch branch = Branch::positive);
// Highest entropy the model can certify (ln of total multiplicity if bounded).
double max_entropy(const CanonicalModel& model);

struct EquilibriumSplit {
  double energy_a = 0.0;
  double energy_b = 0.0;
  InverseTemperature b;
};

// Maximum-entropy split of E_total between two independent systems: the
// common b at which E_a(b) + E_b(b) = E_total.
EquilibriumSplit equilibrium_split(const CanonicalModel& a, const CanonicalModel& b,
                                   double energy_total);

}  // namespace ses
