#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "ses/equilibrium.hpp"
#include "ses/error.hpp"

using namespace ses;

namespace {

const Spectrum kTwo = build_finite({{0, 1}, {1, 1}});

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ParseError;
}

Spectrum random_spectrum(std::mt19937_64& rng, int max_levels = 7, bool degenerate = true) {
  std::uniform_int_distribution<int> count(2, max_levels), deg(1, 3);
  std::uniform_real_distribution<double> gap(0.05, 1.0);
  const int n = count(rng);
  std::vector<Level> levels;
  double e = 0.0;
  for (int j = 0; j < n; ++j) {
    levels.push_back({e, degenerate ? double(deg(rng)) : 1.0});
    e += gap(rng);
  }
  return build_finite(levels);
}

std::vector<std::pair<double, double>> raw(const Spectrum& s) {
  std::vector<std::pair<double, double>> out;
  for (const auto& l : s.levels()) out.push_back({l.energy, l.degeneracy});
  return out;
}

}  // namespace

TEST_CASE("partition function values") {
  CHECK(log_partition(kTwo, 1.0) == doctest::Approx(std::log1p(std::exp(-1.0))).epsilon(1e-15));
  CHECK(log_partition(kTwo, 1.0) == doctest::Approx(0.313262).epsilon(1e-6));
  CHECK(log_partition(kTwo, 0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));

  const Spectrum osc = build_oscillator(1.0, 60, {1.0, 1e-10});
  const double closed = -0.5 - std::log1p(-std::exp(-1.0));
  CHECK(std::fabs(log_partition(osc, 1.0) - closed) < 1e-12);
  CHECK(closed == doctest::Approx(-0.0413249).epsilon(1e-6));
}

TEST_CASE("canonical state probabilities") {
  auto two = std::make_shared<Spectrum>(kTwo);
  const auto p0 = canonical_state(two, 0.0);
  CHECK(p0.probs[0] == doctest::Approx(0.5).epsilon(1e-15));
  const auto p1 = canonical_state(two, 1.0);
  CHECK(p1.probs[0] == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))).epsilon(1e-15));
  CHECK(p1.probs[0] == doctest::Approx(0.731059).epsilon(1e-6));
  const auto inv = canonical_state(two, -std::log(3.0));
  CHECK(inv.probs[0] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(inv.probs[1] == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(inv.probs[0] + inv.probs[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("thermal properties against closed forms") {
  const ThermalPoint t = thermal_properties(kTwo, 1.0);
  const double e = 1.0 / (std::exp(1.0) + 1.0);
  CHECK(t.energy == doctest::Approx(e).epsilon(1e-15));
  CHECK(t.energy == doctest::Approx(0.268941).epsilon(1e-6));
  CHECK(t.entropy == doctest::Approx(e + std::log1p(std::exp(-1.0))).epsilon(1e-15));
  CHECK(t.entropy == doctest::Approx(0.582203).epsilon(1e-6));
  CHECK(t.entropy == doctest::Approx(t.b * t.energy + t.log_partition).epsilon(1e-14));

  const Spectrum osc = build_oscillator_auto(1.0);
  CHECK(thermal_properties(osc, 1.0).energy ==
        doctest::Approx(0.5 + 1.0 / std::expm1(1.0)).epsilon(1e-14));
  const double s = std::sinh(0.5 * 2.0);
  CHECK(thermal_properties(osc, 2.0).variance == doctest::Approx(0.25 / (s * s)).epsilon(1e-13));
  CHECK(thermal_properties(osc, 2.0).variance == doctest::Approx(0.1810154).epsilon(1e-6));
  const ThermalPoint c = thermal_properties(osc, 0.5);
  CHECK(c.heat_capacity == doctest::Approx(0.25 * c.variance).epsilon(1e-15));
}

TEST_CASE("beta_of_energy examples") {
  CHECK(beta_of_energy(kTwo, 0.5).value == doctest::Approx(0.0).epsilon(1e-12).scale(1));
  const InverseTemperature neg = beta_of_energy(kTwo, 0.75);
  CHECK(neg.value == doctest::Approx(-std::log(3.0)).epsilon(1e-13));
  CHECK(neg.temperature() == doctest::Approx(-0.910239).epsilon(1e-6));
  const double e1 = thermal_properties(kTwo, 1.0).energy;
  CHECK(beta_of_energy(kTwo, e1).value == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(beta_of_energy(kTwo, 0.0).limit == InverseTemperature::Limit::ground);
  CHECK(beta_of_energy(kTwo, 1.0).limit == InverseTemperature::Limit::top);
  CHECK(code_of([] { beta_of_energy(kTwo, 1.5); }) == ErrorCode::EnergyOutOfRange);
  CHECK(code_of([] { beta_of_energy(kTwo, -0.1); }) == ErrorCode::EnergyOutOfRange);
  CHECK(code_of([] { beta_of_energy(build_oscillator_auto(1.0), 50.0); }) ==
        ErrorCode::EnergyOutOfRange);
}

TEST_CASE("ses_energy_of_entropy examples") {
  CHECK(ses_energy_of_entropy(kTwo, std::log(2.0), Branch::positive) == doctest::Approx(0.5));
  CHECK(ses_energy_of_entropy(kTwo, std::log(2.0), Branch::negative) == doctest::Approx(0.5));
  CHECK(ses_energy_of_entropy(kTwo, 0.0, Branch::positive) == 0.0);
  CHECK(ses_energy_of_entropy(kTwo, 0.0, Branch::negative) == 1.0);
  const double s = -(0.75 * std::log(0.75) + 0.25 * std::log(0.25));
  CHECK(s == doctest::Approx(0.562335).epsilon(1e-6));
  CHECK(ses_energy_of_entropy(kTwo, s, Branch::positive) == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(ses_energy_of_entropy(kTwo, s, Branch::negative) == doctest::Approx(0.75).epsilon(1e-13));
  CHECK(code_of([] { ses_energy_of_entropy(kTwo, 0.8); }) == ErrorCode::EntropyOutOfRange);
  CHECK(code_of([] { ses_energy_of_entropy(kTwo, -0.1); }) == ErrorCode::EntropyOutOfRange);
  CHECK(code_of([] { ses_energy_of_entropy(build_oscillator_auto(1.0), 0.5, Branch::negative); }) ==
        ErrorCode::BranchUnavailable);

  const Spectrum g4 = build_finite({{0, 4}, {1, 1}});
  CHECK(ses_energy_of_entropy(g4, std::log(2.0)) == 0.0);
}

TEST_CASE("equilibrium split") {
  const EquilibriumSplit same = equilibrium_split(kTwo, kTwo, 1.0);
  CHECK(same.energy_a == doctest::Approx(0.5));
  CHECK(same.b.value == doctest::Approx(0.0).scale(1));

  const Spectrum wide = build_finite({{0, 1}, {2, 1}});
  const EquilibriumSplit split = equilibrium_split(kTwo, wide, 1.0);
  auto total_entropy = [&](double ea) {
    return ses_entropy_of_energy(kTwo, ea) + ses_entropy_of_energy(wide, 1.0 - ea);
  };
  double best = 0.0, best_s = -1.0;
  for (int i = 1; i < 1000000; ++i) {
    const double ea = i * 1e-6;
    const double s = total_entropy(ea);
    if (s > best_s) best_s = s, best = ea;
  }
  CHECK(std::fabs(split.energy_a - best) <= 2e-6);
  const double ba = beta_of_energy(kTwo, split.energy_a).value;
  const double bb = beta_of_energy(wide, split.energy_b).value;
  CHECK(ba == doctest::Approx(bb).epsilon(1e-8));
  CHECK(split.b.value == doctest::Approx(ba).epsilon(1e-8));

  const EquilibriumSplit cold = equilibrium_split(kTwo, wide, 1e-6);
  CHECK(cold.b.value > 10.0);
  CHECK(code_of([&] { equilibrium_split(kTwo, wide, 3.5); }) == ErrorCode::EnergyOutOfRange);
}

TEST_CASE("round trip b -> E -> b over six decades") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const Spectrum s = random_spectrum(rng);
    for (int i = 0; i <= 60; ++i) {
      const double b = std::pow(10.0, -3.0 + 0.1 * i);
      const double first_gap = s[1].energy - s[0].energy;
      if (b * first_gap > 600) continue;
      const InverseTemperature back = beta_of_excess(s, s.summary(b).excess);
      CHECK(back.value == doctest::Approx(b).epsilon(1e-9));
      const InverseTemperature neg = beta_of_deficit(s, s.summary(-b).deficit);
      const double last_gap = s[s.size() - 1].energy - s[s.size() - 2].energy;
      if (b * last_gap > 600) continue;
      CHECK(neg.value == doctest::Approx(-b).epsilon(1e-9));
    }
  }
}

TEST_CASE("fundamental relation derivatives") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Spectrum s = random_spectrum(rng);
    const double lo = s.summary(4.0).energy, hi = s.summary(-4.0).energy;
    std::vector<double> grid(200), entropy(200);
    for (int i = 0; i < 200; ++i) {
      grid[i] = lo + (hi - lo) * i / 199.0;
      entropy[i] = ses_entropy_of_energy(s, grid[i]);
    }
    for (int i = 1; i < 199; ++i) CHECK(entropy[i + 1] - 2 * entropy[i] + entropy[i - 1] <= 1e-10);

    for (double b : {-2.0, -0.3, 0.4, 1.5, 3.0}) {
      const ThermalPoint t = thermal_properties(s, b);
      const double h = 1e-4 * std::sqrt(t.variance);
      const double sp = ses_entropy_of_energy(s, t.energy + h);
      const double sm = ses_entropy_of_energy(s, t.energy - h);
      CHECK((sp - sm) / (2 * h) == doctest::Approx(b).epsilon(1e-6).scale(1.0));
      const double h2 = 2e-3 * std::sqrt(t.variance);
      const double d2 = (ses_entropy_of_energy(s, t.energy + h2) - 2 * t.entropy +
                         ses_entropy_of_energy(s, t.energy - h2)) /
                        (h2 * h2);
      CHECK(-1.0 / d2 == doctest::Approx(t.variance).epsilon(1e-4));
      if (b > 0) {
        const double temp = 1.0 / b, dt = 1e-5 * temp;
        const double dlnq = (log_partition(s, 1.0 / (temp + dt)) - log_partition(s, 1.0 / (temp - dt))) / (2 * dt);
        CHECK(temp * temp * dlnq == doctest::Approx(t.energy).epsilon(1e-6).scale(1.0));
      }
    }
    double previous = kInfinity;
    for (int i = -50; i <= 50; ++i) {
      const double e = thermal_properties(s, 0.1 * i).energy;
      CHECK(e < previous);
      previous = e;
    }
  }
}

TEST_CASE("canonical state maximizes entropy at fixed energy") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Spectrum s = random_spectrum(rng);
    std::vector<double> g;
    for (const auto& l : s.levels()) g.push_back(l.degeneracy);
    for (int k = 0; k < 1000; ++k) {
      std::vector<double> q(s.size());
      double sum = 0;
      for (auto& x : q) sum += (x = -std::log(u(rng) + 1e-300));
      double e = 0;
      for (std::size_t j = 0; j < q.size(); ++j) e += (q[j] /= sum) * s[j].energy;
      CHECK(ses_entropy_of_energy(s, e) >= (double)oracle::entropy_of(q, g) - 1e-9);
    }
  }
}

TEST_CASE("entropy-energy inversion against a bisection oracle") {
  const Spectrum s = build_finite({{0, 1}, {1, 1}, {2, 1}});
  const double probs[] = {0.2, 0.3, 0.5};
  double entropy = 0;
  for (double p : probs) entropy -= p * std::log(p);
  CHECK(entropy == doctest::Approx(1.029653).epsilon(1e-6));
  const double b = oracle::bisect(
      [&](double x) { return (double)oracle::canonical(raw(s), x).entropy - entropy; }, 0.0, 50.0);
  CHECK(ses_energy_of_entropy(s, entropy) ==
        doctest::Approx((double)oracle::canonical(raw(s), b).energy).epsilon(1e-12));
}

TEST_CASE("third-law end point") {
  const Spectrum s = build_finite({{0, 4}, {0.5, 2}, {1.5, 1}});
  const ThermalPoint cold = thermal_properties(s, 200.0);
  CHECK(cold.entropy == doctest::Approx(std::log(4.0)).epsilon(1e-12));
  CHECK(ses_entropy_of_energy(s, 0.0) == doctest::Approx(std::log(4.0)).epsilon(1e-15));
  CHECK(beta_of_energy(s, 0.0).temperature() == 0.0);
  CHECK(max_entropy(s) == doctest::Approx(std::log(7.0)).epsilon(1e-15));
}
