#include "ses/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "ses/availability.hpp"
#include "ses/diagram.hpp"
#include "ses/equilibrium.hpp"
#include "ses/error.hpp"
#include "ses/interactions.hpp"
#include "ses/io.hpp"
#include "ses/opensys.hpp"
#include "ses/partitioning.hpp"

namespace ses::verify {

int Report::passed() const {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return c.passed; }));
}

int Report::failed() const { return static_cast<int>(checks.size()) - passed(); }

std::string Report::text() const {
  std::ostringstream out;
  out << "suite,check,status,observed,bound,samples\n";
  for (const auto& c : checks)
    out << c.suite << ',' << c.name << ',' << (c.passed ? "pass" : "FAIL") << ','
        << io::format_number(c.observed) << ',' << io::format_number(c.bound) << ',' << c.samples << '\n';
  out << "# passed=" << passed() << " failed=" << failed() << '\n';
  return out.str();
}

namespace {

using SpectrumPtr = std::shared_ptr<const Spectrum>;

class Suite {
 public:
  Suite(std::string name, std::uint64_t seed, std::size_t index, Report& report)
      : name_(std::move(name)), report_(report) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index)};
    rng_.seed(seq);
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  void add(const std::string& check, bool passed, double observed, double bound, int samples) {
    report_.checks.push_back({name_, check, passed, observed, bound, samples});
  }
  // Passes when the worst observed error is within bound.
  void within(const std::string& check, double worst, double bound, int samples) {
    add(check, worst <= bound, worst, bound, samples);
  }

  SpectrumPtr random_spectrum(int max_levels, bool degenerate) {
    const int n = integer(2, max_levels);
    std::vector<Level> levels;
    double e = 0.0;
    for (int j = 0; j < n; ++j) {
      levels.push_back({e, degenerate ? double(integer(1, 3)) : 1.0});
      e += uniform(0.05, 1.0);
    }
    return std::make_shared<Spectrum>(build_finite(std::move(levels)));
  }

  std::vector<double> random_probs(std::size_t n) {
    std::vector<double> p(n);
    double sum = 0.0;
    for (auto& x : p) sum += (x = -std::log(uniform(0.0, 1.0) + 1e-300));
    for (auto& x : p) x /= sum;
    return p;
  }

  LevelDistribution random_state(const SpectrumPtr& s) { return make_state(s, random_probs(s->size())); }

 private:
  std::string name_;
  Report& report_;
  std::mt19937_64 rng_;
};

double rel(double a, double b) { return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-300}); }

double brute_min_energy(std::vector<double> p, const std::vector<double>& e) {
  std::sort(p.begin(), p.end());
  double best = kInfinity;
  do {
    double s = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) s += p[j] * e[j];
    best = std::min(best, s);
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

// ------------------------------------------------------------------ spectra

void spectra_suite(Suite& s, const Tolerances&) {
  double merge_err = 0.0;
  bool ordered = true;
  for (int k = 0; k < 200; ++k) {
    std::vector<Level> levels;
    double total = 0.0;
    for (int j = 0, n = s.integer(1, 8); j < n; ++j) {
      const double g = s.integer(1, 4);
      levels.push_back({0.5 * s.integer(0, 4), g});
      total += g;
    }
    const Spectrum sp = build_finite(levels);
    double sum = 0.0;
    for (std::size_t j = 0; j < sp.size(); ++j) {
      sum += sp[j].degeneracy;
      if (j && !(sp[j].energy > sp[j - 1].energy)) ordered = false;
    }
    merge_err = std::max(merge_err, rel(sum, total));
  }
  s.add("merge_strictly_increasing", ordered, ordered ? 0.0 : 1.0, 0.0, 200);
  s.within("merge_conserves_degeneracy", merge_err, 1e-15, 200);

  double commute = 0.0, additive = 0.0;
  for (int k = 0; k < 50; ++k) {
    const auto a = s.random_spectrum(6, true), b = s.random_spectrum(6, true);
    const Spectrum ab = compose(*a, *b), ba = compose(*b, *a);
    if (ab.size() != ba.size()) {
      commute = kInfinity;
      continue;
    }
    for (std::size_t j = 0; j < ab.size(); ++j)
      commute = std::max({commute, std::fabs(ab[j].energy - ba[j].energy), rel(ab[j].degeneracy, ba[j].degeneracy)});
    const double beta = s.uniform(-2.0, 2.0);
    additive = std::max(additive, std::fabs(log_partition(ab, beta) - log_partition(*a, beta) - log_partition(*b, beta)));
  }
  s.within("compose_commutes", commute, 1e-12, 50);
  s.within("compose_log_partition_additive", additive, 1e-12, 50);

  double certificate = 0.0;
  int cases = 0;
  for (double hnu : {0.5, 1.0, 2.0}) {
    for (double tmax : {1.0, 5.0}) {
      const Spectrum osc = build_oscillator_auto(hnu, {tmax});
      const double x = hnu * osc.size() / tmax;
      const double true_tail = 1.0 / std::expm1(x);
      certificate = std::max(certificate, true_tail / osc.tail_bound());
      certificate = std::max(certificate, osc.tail_bound() / kMaxTailBound);
      ++cases;
    }
  }
  s.within("oscillator_tail_certified", certificate, 1.0 + 1e-12, cases);

  double box_cert = 0.0;
  for (double tmax : {0.5, 2.0, 10.0}) {
    const Spectrum d = build_box_direction(1.0, 1.0, box_direction_levels_for(1.0, 1.0, {}, {tmax}), {}, {tmax});
    const double b = 1.0 / tmax;
    long double kept = 0.0L, rest = 0.0L;
    const int m = static_cast<int>(d.size());
    for (int j = 1; j <= 20 * m; ++j) (j <= m ? kept : rest) += std::exp(-b * 0.125 * (double(j) * j - 1.0));
    box_cert = std::max({box_cert, static_cast<double>(rest / kept) / d.tail_bound(), d.tail_bound() / kMaxTailBound});
  }
  s.within("box_tail_certified", box_cert, 1.0 + 1e-12, 3);
}

// ------------------------------------------------------------------- states

void states_suite(Suite& s, const Tolerances& tol) {
  int mismatches = 0;
  for (int k = 0; k < 200; ++k) {
    const auto sp = s.random_spectrum(7, false);
    const auto st = s.random_state(sp);
    std::vector<double> e;
    for (const auto& l : sp->levels()) e.push_back(l.energy);
    if (state_energy(passive_sort(st)) != brute_min_energy(st.probs, e)) ++mismatches;
  }
  s.add("passive_is_min_permutation", mismatches == 0, mismatches, 0.0, 200);

  double gain = -kInfinity;
  for (int k = 0; k < 1000; ++k) {
    const auto sp = s.random_spectrum(7, true);
    const auto st = s.random_state(sp);
    gain = std::max(gain, state_entropy(st) - ses_entropy_of_energy(*sp, state_energy(st)));
  }
  s.within("max_entropy_principle", std::max(gain, 0.0), tol.entropy_tol, 1000);

  double add_err = 0.0;
  for (int k = 0; k < 50; ++k) {
    const auto a = s.random_state(s.random_spectrum(5, true));
    const auto b = s.random_state(s.random_spectrum(5, true));
    const auto ab = product_state(a, b);
    add_err = std::max({add_err, std::fabs(state_energy(ab) - state_energy(a) - state_energy(b)),
                        std::fabs(state_entropy(ab) - state_entropy(a) - state_entropy(b))});
  }
  s.within("product_state_additive", add_err, 1e-10, 50);

  double norm = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto sp = s.random_spectrum(7, true);
    auto p = s.random_probs(sp->size());
    for (auto& x : p) x *= 1.0 + s.uniform(-5e-10, 5e-10);
    double total = 0.0;
    for (double x : make_state(sp, p).probs) total += x;
    norm = std::max(norm, std::fabs(total - 1.0));
  }
  s.within("renormalized_within_band", norm, 1e-15, 100);
}

// -------------------------------------------------------------- equilibrium

void equilibrium_suite(Suite& s, const Tolerances& tol) {
  double trip = 0.0, concave = -kInfinity, slope = 0.0, curvature = 0.0;
  int trips = 0;
  bool monotone = true;
  for (int k = 0; k < 10; ++k) {
    const auto sp = s.random_spectrum(7, true);
    const double first = (*sp)[1].energy - (*sp)[0].energy;
    const double last = (*sp)[sp->size() - 1].energy - (*sp)[sp->size() - 2].energy;
    for (int i = 0; i <= 60; ++i) {
      const double b = std::pow(10.0, -3.0 + 0.1 * i);
      if (b * first <= 600) {
        trip = std::max(trip, rel(beta_of_excess(*sp, sp->summary(b).excess).value, b));
        ++trips;
      }
      if (b * last <= 600) {
        trip = std::max(trip, rel(beta_of_deficit(*sp, sp->summary(-b).deficit).value, -b));
        ++trips;
      }
    }

    const double lo = sp->summary(4.0).energy, hi = sp->summary(-4.0).energy;
    std::vector<double> entropy(200);
    for (int i = 0; i < 200; ++i) entropy[i] = ses_entropy_of_energy(*sp, lo + (hi - lo) * i / 199.0);
    for (int i = 1; i < 199; ++i) concave = std::max(concave, entropy[i + 1] - 2 * entropy[i] + entropy[i - 1]);

    for (double b : {-2.0, -0.3, 0.4, 1.5, 3.0}) {
      const ThermalPoint t = thermal_properties(*sp, b);
      const double h = tol.fd_step * std::sqrt(t.variance);
      const double d1 = (ses_entropy_of_energy(*sp, t.energy + h) - ses_entropy_of_energy(*sp, t.energy - h)) / (2 * h);
      slope = std::max(slope, std::fabs(d1 - b) / std::max(1.0, std::fabs(b)));
      const double h2 = 20.0 * h;
      const double d2 = (ses_entropy_of_energy(*sp, t.energy + h2) - 2 * t.entropy +
                         ses_entropy_of_energy(*sp, t.energy - h2)) / (h2 * h2);
      curvature = std::max(curvature, rel(-1.0 / d2, t.variance));
    }
    double previous = kInfinity;
    for (int i = -50; i <= 50; ++i) {
      const double e = thermal_properties(*sp, 0.1 * i).energy;
      if (!(e < previous)) monotone = false;
      previous = e;
    }
  }
  s.within("beta_round_trip", trip, 1e-9, trips);
  s.within("entropy_concave", std::max(concave, 0.0), 1e-10, 10 * 198);
  s.within("dS_dE_equals_b", slope, 1e-6, 50);
  s.within("variance_from_curvature", curvature, 1e-4, 50);
  s.add("energy_decreasing_in_b", monotone, monotone ? 0.0 : 1.0, 0.0, 10 * 101);

  double third = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto sp = s.random_spectrum(7, true);
    const double gap = (*sp)[1].energy - (*sp)[0].energy;
    third = std::max(third, std::fabs(thermal_properties(*sp, 60.0 / gap).entropy - std::log((*sp)[0].degeneracy)));
    third = std::max(third, std::fabs(max_entropy(*sp) - thermal_properties(*sp, 0.0).entropy));
  }
  s.within("third_law_and_max_entropy", third, 1e-12, 20);

  const auto two = std::make_shared<Spectrum>(build_finite({{0, 1}, {1, 1}}));
  s.within("negative_temperature_example",
           std::fabs(beta_of_energy(*two, 0.75).temperature() + 0.910239), 1e-6, 1);
}

// ------------------------------------------------------------------ opensys

GrandModel box_gas(double temperature, double n_scale) {
  const double b = 1.0 / temperature;
  auto single = std::make_shared<SpectrumProduct>(box_product(BoxGeometry::cube(1.0, 1.0), {}, {2.0 * temperature}));
  const double mu_max = (std::log(2.0 * n_scale) - single->summary(b).log_partition) / b;
  return GrandModel::independent(single, Counting::boltzmann, 1.0, VolumeScaling::box, {b, b, mu_max});
}

void opensys_suite(Suite& s, const Tolerances& tol) {
  const auto slot = std::make_shared<Spectrum>(build_finite({{0, 1}}));
  const GrandModel toy = GrandModel::from_sectors({slot}, 1.0, VolumeScaling::none, {0.1, 10.0, 1.0});
  double toy_err = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double b = s.uniform(0.1, 10.0);
    const GrandPoint g = grand_properties(toy, b, 0.0);
    toy_err = std::max({toy_err, std::fabs(g.log_partition - std::log(2.0)), std::fabs(g.amount - 0.5)});
  }
  s.within("one_slot_closed_form", toy_err, 1e-15, 20);

  const auto single = std::make_shared<Spectrum>(build_finite({{0, std::exp(20.0)}}));
  const GrandModel geo = GrandModel::independent(single, Counting::distinguishable, 1.0, VolumeScaling::none,
                                                 {1.0, 1.0, std::log(0.9) - 20.0}, 1e-15);
  double geo_err = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double x = s.uniform(0.05, 0.9);
    const GrandPoint g = grand_properties(geo, 1.0, std::log(x) - 20.0);
    geo_err = std::max({geo_err, rel(g.amount, x / (1 - x)), rel(g.log_partition, -std::log1p(-x))});
  }
  s.within("geometric_closed_form", geo_err, 1e-10, 20);

  double dn = 0.0, dp = 0.0, ident = 0.0, inv = 0.0;
  for (double temperature : {200.0, 1000.0}) {
    const GrandModel gas = box_gas(temperature, 10.0);
    const double b = 1.0 / temperature;
    for (int k = 0; k < 5; ++k) {
      const double target = s.uniform(1.0, 15.0);
      const double mu = fugacity_of_amount(gas, b, target);
      const GrandPoint g = grand_properties(gas, b, mu);
      inv = std::max(inv, std::fabs(g.amount - target) / std::max(1.0, target));
      ident = std::max(ident, rel(g.entropy / b, g.energy - mu * g.amount + g.log_partition / b));
      const double hm = tol.fd_step / b;
      const double lp = grand_properties(gas, b, mu + hm).log_partition;
      const double lm = grand_properties(gas, b, mu - hm).log_partition;
      dn = std::max(dn, rel((lp - lm) / (2 * hm * b), g.amount));
      const double hv = tol.fd_step;
      const double vp = grand_properties(gas.at_volume(1.0 + hv), b, mu).log_partition;
      const double vm = grand_properties(gas.at_volume(1.0 - hv), b, mu).log_partition;
      dp = std::max(dp, rel((vp - vm) / (2 * hv * b), g.pressure));
    }
  }
  s.within("fugacity_inversion", inv, 1e-9, 10);
  s.within("entropy_identity", ident, 1e-9, 10);
  s.within("amount_from_dlnQ_dmu", dn, 1e-6, 10);
  s.within("pressure_from_dlnQ_dV", dp, 1e-5, 10);

  double previous = kInfinity, last = 0.0;
  bool decreasing = true;
  for (double a : {1e-2, 1e-3, 1e-4, 1e-5}) {
    const double temperature = 0.125 / a;
    const GrandModel gas = box_gas(temperature, 100.0);
    const double mu = fugacity_of_amount(gas, 1.0 / temperature, 100.0);
    const GrandPoint g = grand_properties(gas, 1.0 / temperature, mu);
    last = std::fabs(g.euler) / (g.amount * temperature);
    if (!(last < previous)) decreasing = false;
    previous = last;
  }
  s.add("euler_deviation_decreasing", decreasing, last, 1e-2, 4);
  s.within("euler_deviation_classical", last, 1e-2, 4);
}

// ------------------------------------------------------------- availability

// n Boltzmann-counted particles in a box, as a function of (b, V, n).
struct GasPoint {
  double energy, entropy;
};

class ClassicalGas {
 public:
  ClassicalGas(double t_ref, double v_ref)
      : v_ref_(v_ref),
        single_(std::make_shared<SpectrumProduct>(box_product(BoxGeometry::cube(1.0, v_ref), {}, {4.0 * t_ref}))) {}

  GasPoint at(double b, double volume, double amount) const {
    const auto scaled = single_->scaled(std::pow(v_ref_ / volume, 2.0 / 3.0));
    const CanonicalSummary one = scaled->summary(b);
    const double lnq = amount * one.log_partition - std::lgamma(amount + 1.0);
    return {amount * one.energy, lnq + b * amount * one.energy};
  }
  double log_single(double b) const { return single_->summary(b).log_partition; }

 private:
  double v_ref_;
  std::shared_ptr<const SpectrumProduct> single_;
};

void availability_suite(Suite& s, const Tolerances& tol) {
  double hierarchy = 0.0, identity = 0.0;
  int strict = 0;
  for (int k = 0; k < 1000; ++k) {
    const auto sp = s.random_spectrum(7, true);
    const auto st = s.random_state(sp);
    const auto other = s.random_state(sp);
    const double t = s.uniform(0.1, 10.0);
    const double erg = ergotropy(st), psi = adiabatic_availability(st);
    const double omega = available_energy(st, Reservoir::thermal(t));
    hierarchy = std::max({hierarchy, -erg, erg - psi, psi - omega});
    if (psi - erg > 1e-9) ++strict;
    const double omega2 = available_energy(other, Reservoir::thermal(t));
    const double lhs = (state_energy(other) - omega2) - (state_energy(st) - omega);
    identity = std::max(identity, std::fabs(lhs - t * (state_entropy(other) - state_entropy(st))));
  }
  s.within("hierarchy_erg_psi_omega", std::max(hierarchy, 0.0), tol.energy_tol, 1000);
  s.add("ergotropy_strictly_below_psi_somewhere", strict > 0, strict, 1.0, 1000);
  s.within("unavailable_energy_identity", identity, tol.energy_tol, 1000);

  double additive = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto a = s.random_state(s.random_spectrum(5, true));
    const auto b = s.random_state(s.random_spectrum(5, true));
    const Reservoir r = Reservoir::thermal(s.uniform(0.2, 5.0));
    additive = std::max(additive, std::fabs(available_energy(product_state(a, b), r) - available_energy(a, r) -
                                            available_energy(b, r)));
  }
  s.within("available_energy_additive", additive, 1e-9, 100);

  // Gamma: canonical state of a fixed spectrum is the minimum.
  {
    const auto sp = s.random_spectrum(7, true);
    const double t = 0.7;
    const auto ref = canonical_state(sp, 1.0 / t);
    const Reservoir r = Reservoir::thermal(t);
    const double g_ref = availability_function({state_energy(ref), state_entropy(ref), 1, 0}, r);
    double worst = kInfinity;
    for (int k = 0; k < 1000; ++k) {
      const double w = s.uniform(0.0, 1.0);
      auto p = s.random_probs(sp->size());
      for (std::size_t j = 0; j < p.size(); ++j) p[j] = (1 - w) * ref.probs[j] + w * p[j];
      const auto st = make_state(sp, p);
      worst = std::min(worst, availability_function({state_energy(st), state_entropy(st), 1, 0}, r) - g_ref);
    }
    s.add("gamma_minimum_at_reference", worst >= -tol.energy_tol, worst, -tol.energy_tol, 1000);
  }

  const double t_ref = 50.0, v_ref = 1.0, n_ref = 10.0, b_ref = 1.0 / t_ref;
  const ClassicalGas gas(t_ref, v_ref);
  const GasPoint ref = gas.at(b_ref, v_ref, n_ref);
  const double p_ref = (2.0 / 3.0) * ref.energy / v_ref;
  const double h = 1e-4;
  const double mu_ref = -t_ref * (gas.log_single(b_ref) -
                                  (std::lgamma(n_ref + 1 + h) - std::lgamma(n_ref + 1 - h)) / (2 * h));
  struct KindCase {
    const char* name;
    ReservoirKind kind;
    bool vary_v, vary_n;
  };
  for (const KindCase& c : {KindCase{"phi_minimum_at_reference", ReservoirKind::variable_V, true, false},
                            KindCase{"upsilon_minimum_at_reference", ReservoirKind::variable_n, false, true},
                            KindCase{"xi_minimum_at_reference", ReservoirKind::variable_Vn, true, true}}) {
    const Reservoir r{t_ref, p_ref, mu_ref, c.kind};
    const double a_ref = availability_function({ref.energy, ref.entropy, v_ref, n_ref}, r);
    double worst = kInfinity;
    for (int k = 0; k < 1000; ++k) {
      const double b = b_ref * std::exp(s.uniform(-0.5, 0.5));
      const double v = c.vary_v ? v_ref * std::exp(s.uniform(-0.5, 0.5)) : v_ref;
      const double n = c.vary_n ? n_ref * std::exp(s.uniform(-0.5, 0.5)) : n_ref;
      const GasPoint x = gas.at(b, v, n);
      worst = std::min(worst, availability_function({x.energy, x.entropy, v, n}, r) - a_ref);
    }
    const double bound = -tol.energy_tol * t_ref * n_ref;
    s.add(c.name, worst >= bound, worst, bound, 1000);
  }

  double sink = 0.0, carnot = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double ta = s.uniform(1.0, 10.0), tb = s.uniform(0.1, 0.99) * ta;
    const double e = s.uniform(0.1, 10.0), irr = s.uniform(0.0, 1.0);
    const SinkRequirements q = sink_requirements(ta, tb, e, irr);
    sink = std::max(sink, std::fabs(q.min_sink_energy - ((tb / ta) * e + tb * irr)));
    carnot = std::max(carnot, std::fabs(q.carnot_fraction - (1.0 - tb / ta)));
  }
  s.within("sink_energy_formula", sink, 0.0, 1000);
  s.within("carnot_fraction_formula", carnot, 0.0, 1000);
}

// ------------------------------------------------------------- interactions

void interactions_suite(Suite& s, const Tolerances&) {
  double pair = 0.0, collapse = 0.0;
  int disagreements = 0;
  for (int k = 0; k < 10000; ++k) {
    double ta = s.uniform(-10.0, 10.0), tb = s.uniform(-10.0, 10.0);
    if (ta == 0.0 || tb == 0.0) continue;
    const double de = s.uniform(-10.0, 10.0);
    const TransferBounds t = transfer_bounds({ta}, {tb}, {de, de / ta});
    pair = std::max({pair, std::fabs(t.lower - de / ta), std::fabs(t.upper - de / tb)});
    const bool rule = (1.0 / ta - 1.0 / tb) * de <= 0.0;
    const bool direction = clausius_direction({ta}, {tb}, de) == Direction::allowed;
    if (direction != rule || t.admissible != rule) ++disagreements;
    const TransferBounds q = transfer_bounds({ta}, {ta}, {de, de / ta});
    collapse = std::max({collapse, std::fabs(q.lower - de / ta), std::fabs(q.upper - de / ta)});
  }
  s.within("reservoir_pair_interval", pair, 0.0, 10000);
  s.within("heat_limit_collapse", collapse, 0.0, 10000);
  s.add("clausius_rule_agreement", disagreements == 0, disagreements, 0.0, 10000);

  double order = kInfinity;
  for (int k = 0; k < 10; ++k) {
    const auto a = s.random_spectrum(6, true), b = s.random_spectrum(6, true);
    const double ea = a->summary(s.uniform(0.3, 2.0)).energy, eb = b->summary(s.uniform(0.3, 2.0)).energy;
    const double ta = beta_of_energy(*a, ea).temperature(), tb = beta_of_energy(*b, eb).temperature();
    auto gap = [&](double e) {
      const FiniteBounds f = transfer_bounds_finite(*a, ea, *b, eb, e);
      const TransferBounds t = transfer_bounds({ta}, {tb}, {e, 0.0});
      return std::fabs(f.s_min - t.lower) + std::fabs(f.s_max - t.upper);
    };
    const double step = 1e-3 * std::min(ea - a->ground_energy(), b->top_energy() - eb);
    order = std::min(order, std::log2(gap(step) / gap(step / 2)));
  }
  s.add("finite_bounds_second_order", order >= 1.9, order, 1.9, 10);

  double reduction = 0.0;
  for (int k = 0; k < 50; ++k) {
    const auto a = s.random_spectrum(6, true), b = s.random_spectrum(6, true);
    const auto ca = canonical_state(a, s.uniform(0.3, 2.0)), cb = canonical_state(b, s.uniform(0.3, 2.0));
    const double e = 0.1 * std::min(state_energy(ca) - a->ground_energy(), b->top_energy() - state_energy(cb));
    const NonequilibriumBounds n = transfer_bounds_nonequilibrium(ca, cb, e);
    const FiniteBounds f = transfer_bounds_finite(*a, state_energy(ca), *b, state_energy(cb), e);
    reduction = std::max({reduction, std::fabs(n.s_min - f.s_min), std::fabs(n.s_max - f.s_max)});
  }
  s.within("nonequilibrium_reduces_to_finite", reduction, 1e-10, 50);

  double carnot = 0.0, bookkeeping = 0.0, heat = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double ta = s.uniform(0.1, 10.0), tb = s.uniform(0.1, 10.0), e = s.uniform(-10.0, 10.0);
    const double w = max_work_interposed({ta}, {tb}, e);
    carnot = std::max(carnot, std::fabs(w - (1.0 - tb / ta) * e));
    bookkeeping = std::max(bookkeeping, std::fabs(w - (e - tb * (e / ta))) / std::max(1.0, std::fabs(e)));
    const double t = s.uniform(0.1, 10.0), hp = s.uniform(-5.0, 5.0), sp = s.uniform(-5.0, 5.0);
    const double dn = s.uniform(-1.0, 1.0), dv = s.uniform(-1.0, 1.0), p = s.uniform(0.1, 5.0);
    const HeatSplit x = measurable_heat_split(t, hp, sp, e, dn, dv, p);
    const double expected = (e - p * dv - (hp - t * sp) * dn) / t;
    heat = std::max(heat, std::fabs(x.entropy - expected) / std::max(1.0, std::fabs(expected)));
  }
  s.within("carnot_work_formula", carnot, 0.0, 1000);
  s.within("carnot_work_bookkeeping", bookkeeping, 1e-12, 1000);
  s.within("measurable_heat_identity", heat, 1e-12, 1000);

  double conduction = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double kc = s.uniform(0.1, 10.0), t = s.uniform(1.0, 1000.0), g = s.uniform(-100.0, 100.0);
    const ConductionSigma c = conduction_sigma(-kc * g, kc, t, g);
    conduction = std::max(conduction, rel(c.from_flux, c.from_gradient));
  }
  s.within("conduction_forms_agree", conduction, 4.0 * 2.220446049250313e-16, 1000);
  s.within("conduction_worked_value", rel(conduction_sigma(100, 1, 300, 0).from_flux, 1e4 / 9e4), 1e-12, 1);
}

// ------------------------------------------------------------- partitioning

void partitioning_suite(Suite& s, const Tolerances&) {
  double closed = 0.0;
  for (int n = 1; n <= 4; ++n) {
    for (int lambda : {2, 4, 8}) {
      const double t = s.uniform(0.5, 5.0);
      const PartitionResult r = ideal_gas_partitioning({n, 1.0, t, lambda});
      const double c = std::cbrt(double(lambda));
      closed = std::max({closed, rel(r.entropy_irr, std::log(std::pow(double(lambda), n))),
                         rel(r.min_work, 1.5 * (c * c - 1.0) * n * t)});
    }
  }
  s.within("closed_forms", closed, 1e-12, 12);

  const BoxGasFamily family(1.0, {}, {10000.0});
  const PartitionResult numeric =
      composite_partitioning(family, {2, 1.0, 1000.0, 2, PartitionModel::composite_numeric});
  const PartitionResult ideal = ideal_gas_partitioning({2, 1.0, 1000.0, 2});
  s.within("numeric_vs_closed_work", rel(numeric.min_work, ideal.min_work), 0.05, 1);
  s.within("numeric_vs_closed_entropy", rel(numeric.entropy_irr, ideal.entropy_irr), 0.05, 1);

  const double entropy = family.build(1.0, 2.0)->summary(1e-3).entropy;
  bool increasing = true, identical = true;
  double previous = 0.0;
  for (int lambda = 2; lambda <= 8; ++lambda) {
    const double w = generic_partitioning(family, 2.0, 1.0, entropy, lambda);
    if (!(w > previous)) increasing = false;
    if (w != max_work_of_merging(family, 2.0, 1.0, entropy, lambda)) identical = false;
    previous = w;
  }
  s.add("work_positive_and_increasing", increasing, previous, 0.0, 7);
  s.add("merge_round_trip_identical", identical, identical ? 0.0 : 1.0, 0.0, 7);

  const double s8 = family.build(1.0, 8.0)->summary(1e-3).entropy;
  const SubdivisionPotential sp = subdivision_potential(family, 8.0, 1.0, s8, 4);
  s.within("subdivision_matches_euler", rel(sp.central_difference, sp.euler_per_compartment), 1e-2, 1);
}

// ------------------------------------------------------------------ diagram

void diagram_suite(Suite& s, const Tolerances&) {
  bool increasing = true;
  double convex = 0.0, dome = 0.0;
  for (int k = 0; k < 10; ++k) {
    const auto sp = s.random_spectrum(7, true);
    const ESCurve c = ses_curve(*sp, 120, true);
    double s_max = 0.0;
    for (const auto& p : c.points) s_max = std::max(s_max, p.entropy);
    dome = std::max(dome, std::fabs(s_max - max_entropy(*sp)));
    for (std::size_t i = 1; i < c.points.size(); ++i)
      if (!(c.points[i].energy > c.points[i - 1].energy)) increasing = false;
    for (std::size_t i = 1; i + 1 < c.points.size(); ++i) {
      const auto &p = c.points[i - 1], &q = c.points[i], &r = c.points[i + 1];
      if (!(q.b > 0.0) || !(r.b > 0.0) || !std::isfinite(p.b)) continue;
      const double ds1 = q.entropy - p.entropy, ds2 = r.entropy - q.entropy;
      if (ds1 < 1e-9 || ds2 < 1e-9) continue;
      const double s1 = (q.energy - p.energy) / ds1, s2 = (r.energy - q.energy) / ds2;
      convex = std::max(convex, (s1 - s2) / std::max(1.0, std::fabs(s1)));
    }
  }
  s.add("curve_energy_increasing", increasing, increasing ? 0.0 : 1.0, 0.0, 10);
  s.within("curve_convex_positive_branch", std::max(convex, 0.0), 1e-9, 10);
  s.within("curve_peak_is_max_entropy", dome, 1e-12, 10);

  double left = -kInfinity, split = 0.0;
  for (int k = 0; k < 200; ++k) {
    const auto sp = s.random_spectrum(7, true);
    const Annotation a = annotate(s.random_state(sp), s.uniform(0.2, 5.0));
    left = std::max(left, a.entropy - ses_entropy_of_energy(*sp, a.energy));
    split = std::max(split, std::fabs(a.energy_part + a.entropy_part - a.omega));
  }
  s.within("states_left_of_curve", std::max(left, 0.0), 1e-12, 200);
  s.within("omega_split_sums", split, 1e-12, 200);
}

using SuiteFn = void (*)(Suite&, const Tolerances&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> suites{
      {"spectra", spectra_suite},           {"states", states_suite},
      {"equilibrium", equilibrium_suite},   {"opensys", opensys_suite},
      {"availability", availability_suite}, {"interactions", interactions_suite},
      {"partitioning", partitioning_suite}, {"diagram", diagram_suite},
  };
  return suites;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : registry()) names.push_back(name);
  return names;
}

Report run(std::uint64_t seed, const Tolerances& tol, const std::vector<std::string>& suites) {
  for (const auto& name : suites) {
    const auto& r = registry();
    if (std::none_of(r.begin(), r.end(), [&](const auto& e) { return e.first == name; }))
      fail(ErrorCode::InvalidArgument, "unknown verify suite '" + name + "'");
  }
  Report report;
  report.seed = seed;
  const auto& r = registry();
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!suites.empty() && std::find(suites.begin(), suites.end(), r[i].first) == suites.end()) continue;
    Suite suite(r[i].first, seed, i, report);
    try {
      r[i].second(suite, tol);
    } catch (const Error& e) {
      suite.add("raised_" + std::string(error_name(e.code())), false, 0.0, 0.0, 0);
    }
  }
  return report;
}

}  // namespace ses::verify
