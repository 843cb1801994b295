#pragma once

#include <optional>
#include <vector>

#include "ses/states.hpp"

namespace ses {

struct CurvePoint {
  double entropy = 0.0;
  double energy = 0.0;
  double b = 0.0;           // +inf at the ground point, -inf at the top point
  double temperature = 0.0;  // +-inf at b = 0
};

struct ESCurve {
  std::vector<CurvePoint> points;  // increasing energy
  bool includes_negative = false;
};

// Stable-equilibrium boundary of the energy-entropy diagram. Throws
// NegativeBranchUnavailable for include_negative on an unbounded spectrum.
ESCurve ses_curve(const CanonicalModel& model, int n_points, bool include_negative);

struct Annotation {
  double energy = 0.0;
  double entropy = 0.0;
  double ses_energy_at_entropy = 0.0;
  double psi = 0.0;
  std::optional<double> reservoir_temperature;
  double reservoir_energy = 0.0;
  double reservoir_entropy = 0.0;
  double energy_part = 0.0;   // E - E_R
  double entropy_part = 0.0;  // T_R (S_R - S)
  double omega = 0.0;
};

Annotation annotate(const LevelDistribution& state, std::optional<double> reservoir_temperature = {});

}  // namespace ses
