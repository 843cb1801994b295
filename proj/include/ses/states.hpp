#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "ses/spectra.hpp"

namespace ses {

// Diagonal state: one probability per level of the spectrum.
struct LevelDistribution {
  std::shared_ptr<const Spectrum> spectrum;
  std::vector<double> probs;
  // Sum of the input probabilities minus one, when renormalized on creation.
  double normalization_adjustment = 0.0;

  std::size_t size() const { return probs.size(); }
};

struct Observables {
  double energy = 0.0;
  double entropy = 0.0;
  double variance = 0.0;
  double disequilibrium = 0.0;
};

// Maximum entropy at energy E on a spectrum; supplied by the equilibrium module.
using SesEntropyOfEnergy = std::function<double(const Spectrum&, double)>;

// Validates and (inside a 1e-9 band) renormalizes. Throws NotNormalized,
// NegativeProbability, LengthMismatch.
LevelDistribution make_state(std::shared_ptr<const Spectrum> spectrum, std::vector<double> probs);

double state_energy(const LevelDistribution& state);
double state_entropy(const LevelDistribution& state);  // -sum p ln(p/g), 0 ln 0 = 0
double state_variance(const LevelDistribution& state);

Observables observables(const LevelDistribution& state, const SesEntropyOfEnergy& ses_entropy);

// Lowest-energy rearrangement of the state's probabilities. A level of
// degeneracy g is treated as g unit sublevels each holding p/g.
LevelDistribution passive_sort(const LevelDistribution& state);

// Product of two states placed on compose(a.spectrum, b.spectrum).
LevelDistribution product_state(const LevelDistribution& a, const LevelDistribution& b);

}  // namespace ses
