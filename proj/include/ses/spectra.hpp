#pragma once

#include <array>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ses/units.hpp"

namespace ses {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Largest neglected canonical probability mass a truncated spectrum may carry
// and still be used for equilibrium calculations.
inline constexpr double kMaxTailBound = 1e-10;

struct Level {
  double energy;
  double degeneracy;
};

// Canonical stable-equilibrium quantities at one inverse temperature b.
// excess/deficit are measured from the ground/top energy and are computed
// from shifted sums, so they keep full relative precision deep in either
// tail; likewise entropy_above_ground = S - ln g_ground and
// entropy_below_top = S - ln g_top.
struct CanonicalSummary {
  double b = 0.0;
  double log_partition = 0.0;
  double energy = 0.0;
  double variance = 0.0;
  double entropy = 0.0;
  double excess = 0.0;
  double deficit = kInfinity;
  double entropy_above_ground = 0.0;
  double entropy_below_top = kInfinity;
};

// Anything with a canonical partition function over a discrete spectrum:
// an explicit level list or a product of independent factors.
class CanonicalModel {
 public:
  virtual ~CanonicalModel() = default;

  virtual CanonicalSummary summary(double b) const = 0;

  virtual double ground_energy() const = 0;
  virtual double top_energy() const = 0;  // +inf when unbounded
  virtual bool bounded() const = 0;
  // Smallest b at which the truncation certificate holds (-inf when bounded).
  virtual double min_beta() const = 0;
  virtual double tail_bound() const = 0;
  virtual double log_ground_degeneracy() const = 0;
  virtual double log_top_degeneracy() const = 0;
  virtual double log_total_degeneracy() const = 0;

  // Same model with every energy multiplied by factor (> 0).
  virtual std::shared_ptr<const CanonicalModel> scaled(double factor) const = 0;

  double span() const { return top_energy() - ground_energy(); }
};

class Spectrum final : public CanonicalModel {
 public:
  // Sorts the levels and merges energies closer than 1e-12 of the span,
  // summing their degeneracies. Throws NonFiniteEnergy / NonPositiveDegeneracy.
  Spectrum(std::vector<Level> levels, bool bounded, double tail_bound, double min_beta,
           std::string label, int index_cutoff = 0);

  const std::vector<Level>& levels() const { return levels_; }
  std::size_t size() const { return levels_.size(); }
  const Level& operator[](std::size_t i) const { return levels_[i]; }
  const std::string& label() const { return label_; }
  int index_cutoff() const { return index_cutoff_; }
  double total_degeneracy() const;

  CanonicalSummary summary(double b) const override;
  double ground_energy() const override { return levels_.front().energy; }
  double top_energy() const override { return bounded_ ? levels_.back().energy : kInfinity; }
  bool bounded() const override { return bounded_; }
  double min_beta() const override { return min_beta_; }
  double tail_bound() const override { return tail_bound_; }
  double log_ground_degeneracy() const override;
  double log_top_degeneracy() const override;
  double log_total_degeneracy() const override;
  std::shared_ptr<const CanonicalModel> scaled(double factor) const override;

  Spectrum scaled_spectrum(double factor) const;
  Spectrum with_label(std::string label) const;

  // Canonical probabilities p_j at b, aligned with levels().
  std::vector<double> canonical_probabilities(double b) const;

 private:
  void check_beta(double b) const;

  std::vector<Level> levels_;
  bool bounded_;
  double tail_bound_;
  double min_beta_;
  std::string label_;
  int index_cutoff_;
};

// Independent subsystems whose energies add: the partition function is the
// product of the factors' partition functions, each raised to its count.
// Counts may be non-integer (used for continuous amounts).
class SpectrumProduct final : public CanonicalModel {
 public:
  struct Factor {
    std::shared_ptr<const Spectrum> spectrum;
    double count = 1.0;
  };

  explicit SpectrumProduct(std::vector<Factor> factors);

  const std::vector<Factor>& factors() const { return factors_; }

  CanonicalSummary summary(double b) const override;
  double ground_energy() const override;
  double top_energy() const override;
  bool bounded() const override;
  double min_beta() const override;
  double tail_bound() const override;
  double log_ground_degeneracy() const override;
  double log_top_degeneracy() const override;
  double log_total_degeneracy() const override;
  std::shared_ptr<const CanonicalModel> scaled(double factor) const override;

 private:
  std::vector<Factor> factors_;
};

struct BoxGeometry {
  double mass = 1.0;
  std::array<double, 3> sides{1.0, 1.0, 1.0};

  double volume() const { return sides[0] * sides[1] * sides[2]; }
  static BoxGeometry cube(double mass, double volume);
};

// max_temperature is k_B*T_max in energy units; empty means the builder's
// default (10x the largest level gap).
struct TruncationPolicy {
  std::optional<double> max_temperature;
  double tail_tolerance = kMaxTailBound;
};

Spectrum build_finite(std::vector<Level> levels, std::string label = "finite");

// Neglected-to-kept canonical mass ratio of an n-level oscillator at b.
double oscillator_tail_bound(double hnu, int n_levels, double b);
Spectrum build_oscillator(double hnu, int n_levels, const TruncationPolicy& policy = {});
// Smallest level count whose tail bound is below policy.tail_tolerance.
int oscillator_levels_for(double hnu, const TruncationPolicy& policy);
Spectrum build_oscillator_auto(double hnu, const TruncationPolicy& policy = {});

// One direction of a particle in a box: e_j = h^2 j^2 / (8 m side^2), j >= 1.
double box_direction_tail_bound(double mass, double side, int max_q, const UnitSystem& units,
                                double b);
Spectrum build_box_direction(double mass, double side, int max_q, const UnitSystem& units,
                             const TruncationPolicy& policy = {});
int box_direction_levels_for(double mass, double side, const UnitSystem& units,
                             const TruncationPolicy& policy);

// Explicit three-dimensional level list for 1 <= j_i <= max_q, merged.
Spectrum build_box(const BoxGeometry& geom, int max_q, const UnitSystem& units,
                   const TruncationPolicy& policy = {});

// count independent particles in the box, each a product of its three
// directional spectra (truncation chosen automatically).
SpectrumProduct box_product(const BoxGeometry& geom, const UnitSystem& units,
                            const TruncationPolicy& policy, double count = 1.0);

// All pairwise sums e_a + e_b <= cutoff, degeneracies multiplied, merged.
Spectrum compose(const Spectrum& a, const Spectrum& b, double cutoff = kInfinity,
                 std::optional<double> max_temperature = std::nullopt);
// z-fold composition (z >= 1).
Spectrum compose_power(const Spectrum& s, int z, double cutoff = kInfinity,
                       std::optional<double> max_temperature = std::nullopt);

}  // namespace ses
