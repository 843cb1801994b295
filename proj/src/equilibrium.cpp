#include "ses/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "ses/error.hpp"

namespace ses {

double InverseTemperature::temperature() const {
  switch (limit) {
    case Limit::ground: return 0.0;
    case Limit::top: return -0.0;
    case Limit::finite: break;
  }
  return 1.0 / value;
}

double log_partition(const CanonicalModel& model, double b) { return model.summary(b).log_partition; }

ThermalPoint thermal_properties(const CanonicalModel& model, double b) {
  const CanonicalSummary s = model.summary(b);
  return {b, s.log_partition, s.energy, s.entropy, s.variance, b * b * s.variance};
}

LevelDistribution canonical_state(std::shared_ptr<const Spectrum> spectrum, double b) {
  std::vector<double> p = spectrum->canonical_probabilities(b);
  return LevelDistribution{std::move(spectrum), std::move(p), 0.0};
}

namespace {

// Root of ln q(u) = ln target for u > lo, where q is positive and strictly
// decreasing and q(lo) > target. eval(u) returns {q, dq/du}.
template <class Eval>
double solve_decreasing(const Eval& eval, double target, double lo) {
  const double log_target = std::log(target);
  auto residual = [&](double u, double& slope) {
    const auto [q, dq] = eval(u);
    slope = dq / q;
    return q > 0.0 ? std::log(q) - log_target : -kInfinity;
  };

  double slope = 0.0;
  double step = std::max(1.0, std::fabs(lo));
  double hi = lo + step;
  for (int i = 0; residual(hi, slope) > 0.0; ++i) {
    if (i > 4000) fail(ErrorCode::EnergyOutOfRange, "could not bracket the inverse temperature");
    lo = hi;
    step *= 2.0;
    hi = lo + step;
  }

  double u = 0.5 * (lo + hi);
  double last = kInfinity;
  for (int it = 0; it < 400; ++it) {
    const double r = residual(u, slope);
    if (r == 0.0) return u;
    if (r > 0.0) lo = u; else hi = u;
    if (std::fabs(r) < 1e-15 || hi - lo <= 4e-16 * std::max(std::fabs(lo), std::fabs(hi))) return u;
    const double newton = u - r / slope;
    const bool contracting = std::fabs(r) < 0.5 * last;
    last = std::fabs(r);
    if (std::isfinite(newton) && newton > lo && newton < hi && (contracting || it == 0)) {
      u = newton;
    } else {
      u = 0.5 * (lo + hi);
    }
  }
  return u;
}

double positive_floor(const CanonicalModel& model) {
  return model.bounded() ? 0.0 : model.min_beta();
}

InverseTemperature solve_excess(const CanonicalModel& model, double excess) {
  const double lo = positive_floor(model);
  auto eval = [&](double b) {
    const CanonicalSummary s = model.summary(b);
    return std::pair{s.excess, -s.variance};
  };
  const double at_lo = model.summary(lo).excess;
  if (!(excess < at_lo)) {
    if (!model.bounded())
      fail(ErrorCode::EnergyOutOfRange, "energy above the certified range of the truncated spectrum");
    return {0.0, InverseTemperature::Limit::finite};
  }
  return {solve_decreasing(eval, excess, lo), InverseTemperature::Limit::finite};
}

InverseTemperature solve_deficit(const CanonicalModel& model, double deficit) {
  auto eval = [&](double u) {
    const CanonicalSummary s = model.summary(-u);
    return std::pair{s.deficit, -s.variance};
  };
  if (!(deficit < model.summary(0.0).deficit)) return {0.0, InverseTemperature::Limit::finite};
  return {-solve_decreasing(eval, deficit, 0.0), InverseTemperature::Limit::finite};
}

}  // namespace

InverseTemperature beta_of_excess(const CanonicalModel& model, double excess) {
  if (!(excess >= 0.0) || !std::isfinite(excess))
    fail(ErrorCode::EnergyOutOfRange, "energy below the ground level");
  if (excess == 0.0) return InverseTemperature::ground();
  if (model.bounded()) {
    if (excess > model.span()) fail(ErrorCode::EnergyOutOfRange, "energy above the top level");
    if (excess == model.span()) return InverseTemperature::top();
    const CanonicalSummary mid = model.summary(0.0);
    if (excess > mid.excess) return solve_deficit(model, model.span() - excess);
    if (excess == mid.excess) return {0.0, InverseTemperature::Limit::finite};
  }
  return solve_excess(model, excess);
}

InverseTemperature beta_of_deficit(const CanonicalModel& model, double deficit) {
  if (!model.bounded())
    fail(ErrorCode::NegativeBetaUnbounded, "energy measured from the top needs a bounded spectrum");
  if (!(deficit >= 0.0) || !std::isfinite(deficit))
    fail(ErrorCode::EnergyOutOfRange, "energy above the top level");
  if (deficit == 0.0) return InverseTemperature::top();
  if (deficit >= model.span()) {
    if (deficit == model.span()) return InverseTemperature::ground();
    fail(ErrorCode::EnergyOutOfRange, "energy below the ground level");
  }
  const CanonicalSummary mid = model.summary(0.0);
  if (deficit > mid.deficit) return solve_excess(model, model.span() - deficit);
  return solve_deficit(model, deficit);
}

InverseTemperature beta_of_energy(const CanonicalModel& model, double energy) {
  if (!std::isfinite(energy)) fail(ErrorCode::EnergyOutOfRange, "energy is not finite");
  const double e0 = model.ground_energy();
  if (energy < e0) fail(ErrorCode::EnergyOutOfRange, "energy below the ground level");
  if (energy == e0) return InverseTemperature::ground();
  if (!model.bounded()) return solve_excess(model, energy - e0);
  const double top = model.top_energy();
  if (energy > top) fail(ErrorCode::EnergyOutOfRange, "energy above the top level");
  if (energy == top) return InverseTemperature::top();
  const CanonicalSummary mid = model.summary(0.0);
  if (energy == mid.energy) return {0.0, InverseTemperature::Limit::finite};
  if (energy < mid.energy) return solve_excess(model, energy - e0);
  return solve_deficit(model, top - energy);
}

double ses_entropy_of_energy(const CanonicalModel& model, double energy) {
  const InverseTemperature b = beta_of_energy(model, energy);
  switch (b.limit) {
    case InverseTemperature::Limit::ground: return model.log_ground_degeneracy();
    case InverseTemperature::Limit::top: return model.log_top_degeneracy();
    case InverseTemperature::Limit::finite: break;
  }
  return model.summary(b.value).entropy;
}

SesEntropyOfEnergy ses_entropy_oracle() {
  return [](const Spectrum& spectrum, double energy) {
    return ses_entropy_of_energy(spectrum, energy);
  };
}

double max_entropy(const CanonicalModel& model) {
  return model.bounded() ? model.log_total_degeneracy() : model.summary(model.min_beta()).entropy;
}

InverseTemperature beta_of_entropy(const CanonicalModel& model, double entropy, Branch branch) {
  if (branch == Branch::negative && !model.bounded())
    fail(ErrorCode::BranchUnavailable, "negative-temperature branch needs a bounded spectrum");
  const double s_max = max_entropy(model);
  const double tol = 1e-12 * std::max(1.0, std::fabs(s_max));
  if (!std::isfinite(entropy) || entropy < -tol || entropy > s_max + tol)
    fail(ErrorCode::EntropyOutOfRange, "entropy outside [0, S_max]");
  if (entropy >= s_max - tol)
    return {model.bounded() ? 0.0 : model.min_beta(), InverseTemperature::Limit::finite};

  if (branch == Branch::positive) {
    const double target = entropy - model.log_ground_degeneracy();
    if (target <= 0.0) return InverseTemperature::ground();
    auto eval = [&](double b) {
      const CanonicalSummary s = model.summary(b);
      return std::pair{s.entropy_above_ground, -b * s.variance};
    };
    return {solve_decreasing(eval, target, positive_floor(model)), InverseTemperature::Limit::finite};
  }
  const double target = entropy - model.log_top_degeneracy();
  if (target <= 0.0) return InverseTemperature::top();
  auto eval = [&](double u) {
    const CanonicalSummary s = model.summary(-u);
    return std::pair{s.entropy_below_top, -u * s.variance};
  };
  return {-solve_decreasing(eval, target, 0.0), InverseTemperature::Limit::finite};
}

double ses_energy_of_entropy(const CanonicalModel& model, double entropy, Branch branch) {
  const InverseTemperature b = beta_of_entropy(model, entropy, branch);
  switch (b.limit) {
    case InverseTemperature::Limit::ground: return model.ground_energy();
    case InverseTemperature::Limit::top: return model.top_energy();
    case InverseTemperature::Limit::finite: break;
  }
  return model.summary(b.value).energy;
}

namespace {

class PairModel final : public CanonicalModel {
 public:
  PairModel(const CanonicalModel& a, const CanonicalModel& b) : a_(a), b_(b) {}

  CanonicalSummary summary(double b) const override {
    const CanonicalSummary x = a_.summary(b), y = b_.summary(b);
    CanonicalSummary s;
    s.b = b;
    s.log_partition = x.log_partition + y.log_partition;
    s.energy = x.energy + y.energy;
    s.variance = x.variance + y.variance;
    s.entropy = x.entropy + y.entropy;
    s.excess = x.excess + y.excess;
    s.deficit = x.deficit + y.deficit;
    s.entropy_above_ground = x.entropy_above_ground + y.entropy_above_ground;
    s.entropy_below_top = x.entropy_below_top + y.entropy_below_top;
    return s;
  }
  double ground_energy() const override { return a_.ground_energy() + b_.ground_energy(); }
  double top_energy() const override { return a_.top_energy() + b_.top_energy(); }
  bool bounded() const override { return a_.bounded() && b_.bounded(); }
  double min_beta() const override { return std::max(a_.min_beta(), b_.min_beta()); }
  double tail_bound() const override { return a_.tail_bound() + b_.tail_bound(); }
  double log_ground_degeneracy() const override {
    return a_.log_ground_degeneracy() + b_.log_ground_degeneracy();
  }
  double log_top_degeneracy() const override {
    return a_.log_top_degeneracy() + b_.log_top_degeneracy();
  }
  double log_total_degeneracy() const override {
    return a_.log_total_degeneracy() + b_.log_total_degeneracy();
  }
  std::shared_ptr<const CanonicalModel> scaled(double) const override {
    fail(ErrorCode::InvalidArgument, "pair model cannot be rescaled");
  }

 private:
  const CanonicalModel& a_;
  const CanonicalModel& b_;
};

}  // namespace

EquilibriumSplit equilibrium_split(const CanonicalModel& a, const CanonicalModel& b,
                                   double energy_total) {
  const PairModel pair(a, b);
  const InverseTemperature beta = beta_of_energy(pair, energy_total);
  switch (beta.limit) {
    case InverseTemperature::Limit::ground:
      return {a.ground_energy(), b.ground_energy(), beta};
    case InverseTemperature::Limit::top:
      return {a.top_energy(), b.top_energy(), beta};
    case InverseTemperature::Limit::finite: break;
  }
  const double ea = a.summary(beta.value).energy;
  return {ea, energy_total - ea, beta};
}

}  // namespace ses
