#include "ses/partitioning.hpp"

#include <cmath>

#include "ses/equilibrium.hpp"
#include "ses/error.hpp"

namespace ses {

double ideal_gas_min_work(double n, double temperature, double lambda) {
  return 1.5 * (std::pow(lambda, 2.0 / 3.0) - 1.0) * n * temperature;
}

double ideal_gas_subdivision_derivative(double n, double temperature, double lambda) {
  return n * temperature / std::cbrt(lambda);
}

PartitionResult ideal_gas_partitioning(const PartitionScenario& sc) {
  if (sc.model != PartitionModel::ideal_gas_closed_form)
    fail(ErrorCode::InvalidArgument, "closed form requested for a numeric scenario");
  if (sc.n_particles < 1 || sc.lambda < 1 || !(sc.temperature > 0.0))
    fail(ErrorCode::InvalidArgument, "need n >= 1, lambda >= 1, T > 0");
  return {sc.n_particles * std::log(static_cast<double>(sc.lambda)),
          ideal_gas_min_work(sc.n_particles, sc.temperature, sc.lambda)};
}

BoxGasFamily::BoxGasFamily(double mass, UnitSystem units, TruncationPolicy policy)
    : mass_(mass), units_(units), policy_(policy) {
  if (!(mass > 0.0)) fail(ErrorCode::InvalidArgument, "mass must be positive");
}

std::shared_ptr<const CanonicalModel> BoxGasFamily::build(double volume, double amount) const {
  if (!(volume > 0.0) || !(amount > 0.0))
    fail(ErrorCode::InvalidArgument, "volume and amount must be positive");
  return std::make_shared<SpectrumProduct>(
      box_product(BoxGeometry::cube(mass_, volume), units_, policy_, amount));
}

double BoxGasFamily::pressure(const CanonicalModel& model, double b, double volume) const {
  return (2.0 / 3.0) * model.summary(b).energy / volume;
}

ComposedFamily::ComposedFamily(SingleBuilder single, double energy_cutoff)
    : single_(std::move(single)), cutoff_(energy_cutoff) {}

std::shared_ptr<const CanonicalModel> ComposedFamily::build(double volume, double amount) const {
  const int z = static_cast<int>(std::lround(amount));
  if (std::fabs(amount - z) > 1e-12 || z < 1)
    fail(ErrorCode::IndivisibleScenario, "composed family needs a positive integer amount");
  if (z > 4) fail(ErrorCode::InvalidArgument, "explicit composition is limited to 4 particles");
  return std::make_shared<Spectrum>(compose_power(single_(volume), z, cutoff_));
}

double ComposedFamily::pressure(const CanonicalModel& model, double b, double volume) const {
  // k_B T d lnQ / dV with levels scaling as V^(-2/3).
  const double h = 1e-5 * volume;
  const double ratio_p = std::pow(volume / (volume + h), 2.0 / 3.0);
  const double ratio_m = std::pow(volume / (volume - h), 2.0 / 3.0);
  const double lp = model.scaled(ratio_p)->summary(b).log_partition;
  const double lm = model.scaled(ratio_m)->summary(b).log_partition;
  return (lp - lm) / (2.0 * h * b);
}

double fundamental_energy(const SpectrumFamily& family, double entropy, double volume, double amount) {
  return ses_energy_of_entropy(*family.build(volume, amount), entropy, Branch::positive);
}

namespace {

void check_divisible(const SpectrumFamily& family, double amount, int lambda) {
  if (lambda < 1) fail(ErrorCode::InvalidArgument, "lambda must be at least 1");
  if (family.continuous_amount()) return;
  const double share = amount / lambda;
  if (std::fabs(share - std::round(share)) > 1e-12 * std::max(1.0, share))
    fail(ErrorCode::IndivisibleScenario, "amount is not divisible into lambda equal compartments");
}

double partition_gap(const SpectrumFamily& family, double amount, double volume, double entropy,
                     int lambda) {
  check_divisible(family, amount, lambda);
  if (lambda == 1) return 0.0;
  const double l = lambda;
  return l * fundamental_energy(family, entropy / l, volume / l, amount / l) -
         fundamental_energy(family, entropy, volume, amount);
}

}  // namespace

double generic_partitioning(const SpectrumFamily& family, double amount, double volume,
                            double entropy, int lambda) {
  return partition_gap(family, amount, volume, entropy, lambda);
}

double max_work_of_merging(const SpectrumFamily& family, double amount, double volume,
                           double entropy, int lambda) {
  return partition_gap(family, amount, volume, entropy, lambda);
}

PartitionResult composite_partitioning(const SpectrumFamily& family, const PartitionScenario& sc) {
  if (sc.n_particles < 1 || sc.lambda < 1 || !(sc.temperature > 0.0))
    fail(ErrorCode::InvalidArgument, "need n >= 1, lambda >= 1, T > 0");
  check_divisible(family, sc.n_particles, sc.lambda);
  const double b = 1.0 / sc.temperature;
  const double l = sc.lambda;
  const double s_whole = family.build(sc.volume, sc.n_particles)->summary(b).entropy;
  const double s_parts =
      l * family.build(sc.volume / l, sc.n_particles / l)->summary(b).entropy;
  return {s_whole - s_parts,
          generic_partitioning(family, sc.n_particles, sc.volume, s_whole, sc.lambda)};
}

SubdivisionPotential subdivision_potential(const SpectrumFamily& family, double amount,
                                           double volume, double entropy, int lambda) {
  if (lambda < 2) fail(ErrorCode::InvalidArgument, "central difference needs lambda >= 2");
  for (int l : {lambda - 1, lambda, lambda + 1}) check_divisible(family, amount, l);
  SubdivisionPotential out;
  out.central_difference = 0.5 * (generic_partitioning(family, amount, volume, entropy, lambda + 1) -
                                  generic_partitioning(family, amount, volume, entropy, lambda - 1));

  const double l = lambda;
  const double vc = volume / l, nc = amount / l, sc = entropy / l;
  const auto model = family.build(vc, nc);
  const InverseTemperature beta = beta_of_entropy(*model, sc, Branch::positive);
  if (!beta.is_finite()) fail(ErrorCode::EntropyOutOfRange, "compartment entropy at the ground");
  const double b = beta.value;
  const double e = model->summary(b).energy;
  const double p = family.pressure(*model, b, vc);
  double mu = 0.0;
  if (family.continuous_amount()) {
    const double h = 1e-4 * nc;
    const double fp = -family.build(vc, nc + h)->summary(b).log_partition / b;
    const double fm = -family.build(vc, nc - h)->summary(b).log_partition / b;
    mu = (fp - fm) / (2.0 * h);
  } else {
    const double fp = -family.build(vc, nc + 1)->summary(b).log_partition / b;
    const double fm = nc > 1 ? -family.build(vc, nc - 1)->summary(b).log_partition / b : 0.0;
    mu = nc > 1 ? (fp - fm) / 2.0 : fp - fm;
  }
  out.euler_per_compartment = e - sc / b + p * vc - mu * nc;
  return out;
}

}  // namespace ses
