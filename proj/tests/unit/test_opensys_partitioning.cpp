#include <cmath>

#include "doctest.h"
#include "ses/equilibrium.hpp"
#include "ses/error.hpp"
#include "ses/opensys.hpp"
#include "ses/partitioning.hpp"

using namespace ses;

namespace {

std::shared_ptr<const Spectrum> finite(std::vector<Level> levels) {
  return std::make_shared<Spectrum>(build_finite(std::move(levels)));
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ParseError;
}

struct BoxGas {
  GrandModel model;
  double b;
};

// Single particle in a unit cube, Boltzmann counting, fugacity range up to
// twice the classical amount n_scale.
BoxGas box_gas(double temperature, double n_scale, double volume = 1.0) {
  const double b = 1.0 / temperature;
  auto single = std::make_shared<SpectrumProduct>(
      box_product(BoxGeometry::cube(1.0, volume), {}, {2.0 * temperature}));
  const double lnq1 = single->summary(b).log_partition;
  const double mu_max = (std::log(2.0 * n_scale) - lnq1) / b;
  return {GrandModel::independent(single, Counting::boltzmann, volume, VolumeScaling::box,
                                  {b, b, mu_max}),
          b};
}

}  // namespace

TEST_CASE("one-slot toy model") {
  const auto slot = finite({{0, 1}});
  const GrandModel m = GrandModel::from_sectors({slot}, 1.0, VolumeScaling::none, {0.1, 10, 1});
  CHECK(m.z_max() == 1);
  for (double b : {0.1, 1.0, 7.0}) {
    const GrandPoint g = grand_properties(m, b, 0.0);
    CHECK(g.log_partition == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(g.amount == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g.amount_variance == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(fugacity_of_amount(m, b, 0.5) == doctest::Approx(0.0).scale(1.0));
  }
  const GrandPoint vac = grand_properties(m, 1.0, -60.0);
  CHECK(vac.amount < 1e-25);
  CHECK(vac.log_partition < 1e-25);
  CHECK(code_of([&] { fugacity_of_amount(m, 1.0, 0.0); }) == ErrorCode::AmountOutOfRange);
  CHECK(code_of([&] { fugacity_of_amount(m, 1.0, 0.9); }) == ErrorCode::AmountOutOfRange);
  CHECK(code_of([&] { grand_properties(m, 1.0, 1.5); }) == ErrorCode::OperatingBoxExceeded);
  CHECK(code_of([&] { grand_properties(m, 20.0, 0.0); }) == ErrorCode::OperatingBoxExceeded);
}

TEST_CASE("geometric family in the classical regime") {
  const auto single = finite({{0, std::exp(20.0)}});
  const double mu_half = std::log(0.5) - 20.0;
  const GrandModel m = GrandModel::independent(single, Counting::distinguishable, 1.0,
                                               VolumeScaling::none, {1.0, 1.0, mu_half + 0.1}, 1e-15);
  const GrandPoint g = grand_properties(m, 1.0, mu_half);
  CHECK(g.amount == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(g.log_partition == doctest::Approx(std::log(2.0)).epsilon(1e-10));
  CHECK(g.euler == doctest::Approx(-std::log(2.0)).epsilon(1e-10));
  CHECK(g.entropy == doctest::Approx(g.energy - mu_half * g.amount + g.log_partition).epsilon(1e-12));
  CHECK(fugacity_of_amount(m, 1.0, 1.0) == doctest::Approx(mu_half).epsilon(1e-12));
  CHECK(m.tail_bound() < 1e-15);

  const double mu_x = mu_half + 0.05;
  const double x = std::exp(mu_x + 20.0);
  CHECK(grand_properties(m, 1.0, mu_x).amount == doctest::Approx(x / (1 - x)).epsilon(1e-10));
  CHECK(code_of([&] {
          GrandModel::independent(single, Counting::distinguishable, 1.0, VolumeScaling::none,
                                  {1.0, 1.0, -19.0});
        }) == ErrorCode::OperatingBoxExceeded);
}

TEST_CASE("grand-canonical finite-difference identities") {
  const BoxGas gas = box_gas(1000.0, 10.0);
  const double b = gas.b;
  const double mu = fugacity_of_amount(gas.model, b, 10.0);
  const GrandPoint g = grand_properties(gas.model, b, mu);
  CHECK(g.amount == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(g.entropy / b == doctest::Approx(g.energy - mu * g.amount + g.log_partition / b).epsilon(1e-9));

  const double hm = 1e-4 / b;
  const double dmu = (grand_properties(gas.model, b, mu + hm).log_partition -
                      grand_properties(gas.model, b, mu - hm).log_partition) /
                     (2 * hm);
  CHECK(dmu / b == doctest::Approx(g.amount).epsilon(1e-6));

  const double hv = 1e-4;
  const GrandModel up = gas.model.at_volume(1.0 + hv), down = gas.model.at_volume(1.0 - hv);
  const double dv = (grand_properties(up, b, mu).log_partition -
                     grand_properties(down, b, mu).log_partition) /
                    (2 * hv);
  CHECK(dv / b == doctest::Approx(g.pressure).epsilon(1e-5));

  // Holding mu fixed, d lnQ/db = -(E - mu n).
  const GrandModel wide = GrandModel::independent(
      std::make_shared<SpectrumProduct>(box_product(BoxGeometry::cube(1.0, 1.0), {}, {2000.0})),
      Counting::boltzmann, 1.0, VolumeScaling::box, {0.9 * b, 1.1 * b, mu + 1.0});
  const double hb = 1e-5 * b;
  const double db = (grand_properties(wide, b + hb, mu).log_partition -
                     grand_properties(wide, b - hb, mu).log_partition) /
                    (2 * hb);
  CHECK(db == doctest::Approx(-(g.energy - mu * g.amount)).epsilon(1e-6));
}

TEST_CASE("Euler deviation shrinks toward the classical limit") {
  double previous = kInfinity;
  for (double a : {1e-2, 1e-3, 1e-4, 1e-5}) {
    const double temperature = 0.125 / a;
    const BoxGas gas = box_gas(temperature, 100.0);
    const double mu = fugacity_of_amount(gas.model, gas.b, 100.0);
    const GrandPoint g = grand_properties(gas.model, gas.b, mu);
    const double deviation = std::fabs(g.euler) / (g.amount * temperature);
    CHECK(deviation < previous);
    previous = deviation;
  }
  CHECK(previous < 1e-2);

  const auto single = finite({{0, std::exp(20.0)}});
  const GrandModel dist = GrandModel::independent(single, Counting::distinguishable, 1.0,
                                                  VolumeScaling::none, {1.0, 1.0, -20.0 - 0.005});
  const double mu = fugacity_of_amount(dist, 1.0, 100.0);
  const GrandPoint g = grand_properties(dist, 1.0, mu);
  CHECK(std::fabs(g.euler) / g.amount == doctest::Approx(std::log(101.0) / 100.0).epsilon(1e-8));
}

TEST_CASE("ideal-gas partitioning closed forms") {
  for (int n = 1; n <= 4; ++n) {
    for (int lambda : {2, 4, 8}) {
      const PartitionResult r = ideal_gas_partitioning({n, 1.0, 1.0, lambda});
      CHECK(r.entropy_irr == doctest::Approx(std::log(std::pow(double(lambda), n))).epsilon(1e-12));
      const double c = std::cbrt(double(lambda));
      CHECK(r.min_work == doctest::Approx(1.5 * (c * c - 1) * n).epsilon(1e-12));
    }
  }
  const PartitionResult two = ideal_gas_partitioning({2, 1.0, 1.0, 2});
  CHECK(two.entropy_irr == doctest::Approx(1.386294).epsilon(1e-6));
  CHECK(two.min_work == doctest::Approx(1.7622032).epsilon(1e-7));
  const PartitionResult one = ideal_gas_partitioning({3, 1.0, 1.0, 1});
  CHECK(one.entropy_irr == 0.0);
  CHECK(one.min_work == 0.0);
  const PartitionResult eight = ideal_gas_partitioning({1, 1.0, 1.0, 8});
  CHECK(eight.entropy_irr == doctest::Approx(3 * std::log(2.0)).epsilon(1e-15));
  CHECK(eight.min_work == doctest::Approx(4.5).epsilon(1e-15));

  CHECK(ideal_gas_subdivision_derivative(3, 1, 8) == doctest::Approx(1.5).epsilon(1e-15));
  const double central = 0.5 * (ideal_gas_min_work(3, 1, 9) - ideal_gas_min_work(3, 1, 7));
  CHECK(central == doctest::Approx(1.5).epsilon(1e-3));
  for (int l = 2; l < 50; ++l) CHECK(ideal_gas_min_work(2, 1, l + 1) > ideal_gas_min_work(2, 1, l));
}

TEST_CASE("numeric box-gas partitioning near the classical regime") {
  const BoxGasFamily family(1.0, {}, {10000.0});
  const PartitionResult r = composite_partitioning(family, {2, 1.0, 1000.0, 2, PartitionModel::composite_numeric});
  const PartitionResult closed = ideal_gas_partitioning({2, 1.0, 1000.0, 2});
  CHECK(r.min_work == doctest::Approx(closed.min_work).epsilon(0.05));
  CHECK(r.entropy_irr == doctest::Approx(closed.entropy_irr).epsilon(0.05));
  CHECK(r.entropy_irr > 0.0);

  const double s = family.build(1.0, 2.0)->summary(1e-3).entropy;
  CHECK(generic_partitioning(family, 2.0, 1.0, s, 1) == 0.0);
  double previous = 0.0;
  for (int lambda = 2; lambda <= 6; ++lambda) {
    const double w = generic_partitioning(family, 2.0, 1.0, s, lambda);
    CHECK(w > previous);
    CHECK(w == max_work_of_merging(family, 2.0, 1.0, s, lambda));
    previous = w;
  }

  const SubdivisionPotential sp = subdivision_potential(family, 8.0, 1.0, family.build(1.0, 8.0)->summary(1e-3).entropy, 4);
  CHECK(sp.central_difference == doctest::Approx(sp.euler_per_compartment).epsilon(1e-2));
  CHECK(sp.central_difference == doctest::Approx(ideal_gas_subdivision_derivative(8, 1000, 4)).epsilon(0.05));
}

TEST_CASE("explicitly composed particles") {
  const ComposedFamily family(
      [](double volume) {
        return build_box(BoxGeometry::cube(1.0, volume), 20, {}, {2.0});
      },
      80.0);
  const auto whole = family.build(1.0, 2.0);
  const double s = whole->summary(1.0).entropy;
  const double w = generic_partitioning(family, 2.0, 1.0, s, 2);
  CHECK(w > 0.0);
  CHECK(w == max_work_of_merging(family, 2.0, 1.0, s, 2));

  // Same total energy: the partitioned system has less entropy.
  const double e = whole->summary(1.0).energy;
  const auto half = family.build(0.5, 1.0);
  const double s_parts = 2.0 * ses_entropy_of_energy(*half, e / 2.0);
  CHECK(s_parts < ses_entropy_of_energy(*whole, e));

  CHECK(code_of([&] { generic_partitioning(family, 3.0, 1.0, s, 2); }) == ErrorCode::IndivisibleScenario);
}
