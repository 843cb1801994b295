#pragma once

namespace ses {

// Entropies are always reported in units of k_B. Temperatures enter the
// library as k_B*T (energy units) unless a function says otherwise; the
// UnitSystem only matters where a bare temperature or Planck's constant is
// needed (box spectra, CLI conversions).
struct UnitSystem {
  enum class Mode { reduced, SI };

  double k_B = 1.0;
  double h = 1.0;
  Mode mode = Mode::reduced;

  static UnitSystem reduced() { return {}; }
  static UnitSystem si() { return {1.38066e-23, 6.6260e-34, Mode::SI}; }

  double beta_of_temperature(double T) const { return 1.0 / (k_B * T); }
  double temperature_of_beta(double b) const { return 1.0 / (k_B * b); }
};

}  // namespace ses
