#pragma once

#include <functional>
#include <memory>

#include "ses/spectra.hpp"

namespace ses {

enum class PartitionModel { ideal_gas_closed_form, composite_numeric };

struct PartitionScenario {
  int n_particles = 1;
  double volume = 1.0;
  double temperature = 1.0;  // k_B T_ab
  int lambda = 2;
  PartitionModel model = PartitionModel::ideal_gas_closed_form;
};

struct PartitionResult {
  double entropy_irr = 0.0;
  double min_work = 0.0;
};

// S_irr = n ln(lambda), W_min = 1.5 (lambda^(2/3) - 1) n k_B T.
PartitionResult ideal_gas_partitioning(const PartitionScenario& sc);
double ideal_gas_min_work(double n, double temperature, double lambda);
// dW/dlambda of the closed form, n k_B T lambda^(-1/3).
double ideal_gas_subdivision_derivative(double n, double temperature, double lambda);

// V- and n-dependent canonical model for a single (uncompartmented) system.
class SpectrumFamily {
 public:
  virtual ~SpectrumFamily() = default;
  virtual std::shared_ptr<const CanonicalModel> build(double volume, double amount) const = 0;
  // Whether build() accepts non-integer amounts.
  virtual bool continuous_amount() const = 0;
  // Pressure of the canonical state of build(V, n) at b.
  virtual double pressure(const CanonicalModel& model, double b, double volume) const = 0;
};

// n independent particles in a cube of volume V (separable directional spectra).
class BoxGasFamily final : public SpectrumFamily {
 public:
  BoxGasFamily(double mass, UnitSystem units, TruncationPolicy policy);

  std::shared_ptr<const CanonicalModel> build(double volume, double amount) const override;
  bool continuous_amount() const override { return true; }
  double pressure(const CanonicalModel& model, double b, double volume) const override;

 private:
  double mass_;
  UnitSystem units_;
  TruncationPolicy policy_;
};

// Integer n: explicit n-fold composition of a single-particle spectrum whose
// levels scale as V^(-2/3).
class ComposedFamily final : public SpectrumFamily {
 public:
  using SingleBuilder = std::function<Spectrum(double volume)>;

  ComposedFamily(SingleBuilder single, double energy_cutoff);

  std::shared_ptr<const CanonicalModel> build(double volume, double amount) const override;
  bool continuous_amount() const override { return false; }
  double pressure(const CanonicalModel& model, double b, double volume) const override;

 private:
  SingleBuilder single_;
  double cutoff_;
};

// E^1(S, V, n): energy of the stable-equilibrium state with entropy S.
double fundamental_energy(const SpectrumFamily& family, double entropy, double volume, double amount);

// W = lambda E^1(S/lambda, V/lambda, n/lambda) - E^1(S, V, n).
// Throws IndivisibleScenario when n/lambda is not an allowed amount.
double generic_partitioning(const SpectrumFamily& family, double amount, double volume,
                            double entropy, int lambda);
// Reverse path (merging lambda compartments back into one); same number.
double max_work_of_merging(const SpectrumFamily& family, double amount, double volume,
                           double entropy, int lambda);

struct SubdivisionPotential {
  double central_difference = 0.0;  // [W(lambda+1) - W(lambda-1)] / 2
  double euler_per_compartment = 0.0;  // E - TS + pV - mu n of one compartment
};

// Numeric counterpart of ideal_gas_partitioning: the unpartitioned system is
// the stable-equilibrium state at sc.temperature.
PartitionResult composite_partitioning(const SpectrumFamily& family, const PartitionScenario& sc);

SubdivisionPotential subdivision_potential(const SpectrumFamily& family, double amount,
                                           double volume, double entropy, int lambda);

}  // namespace ses
