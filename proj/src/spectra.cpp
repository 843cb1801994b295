#include "ses/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ses/error.hpp"

namespace ses {

namespace {

constexpr double kMergeTolerance = 1e-12;

std::vector<Level> canonicalize(std::vector<Level> levels) {
  if (levels.empty()) fail(ErrorCode::InvalidArgument, "spectrum needs at least one level");
  for (const auto& level : levels) {
    if (!std::isfinite(level.energy)) fail(ErrorCode::NonFiniteEnergy, "energy is not finite");
    if (!std::isfinite(level.degeneracy) || !(level.degeneracy > 0.0))
      fail(ErrorCode::NonPositiveDegeneracy, "degeneracy must be finite and positive");
  }
  std::stable_sort(levels.begin(), levels.end(),
                   [](const Level& x, const Level& y) { return x.energy < y.energy; });
  const double tol = kMergeTolerance * (levels.back().energy - levels.front().energy);
  std::vector<Level> merged;
  merged.reserve(levels.size());
  for (const auto& level : levels) {
    if (!merged.empty() && level.energy - merged.back().energy <= tol) {
      merged.back().degeneracy += level.degeneracy;
    } else {
      merged.push_back(level);
    }
  }
  return merged;
}

double default_beta_from_gaps(const std::vector<Level>& levels) {
  double gap = 0.0;
  for (std::size_t i = 1; i < levels.size(); ++i)
    gap = std::max(gap, levels[i].energy - levels[i - 1].energy);
  if (!(gap > 0.0)) return kInfinity;
  return 1.0 / (10.0 * gap);
}

double resolve_beta(const TruncationPolicy& policy, double default_max_temperature) {
  const double t_max = policy.max_temperature.value_or(default_max_temperature);
  if (!(t_max > 0.0) || !std::isfinite(t_max))
    fail(ErrorCode::InvalidArgument, "maximum temperature must be positive and finite");
  return 1.0 / t_max;
}

}  // namespace

// ---------------------------------------------------------------- Spectrum

Spectrum::Spectrum(std::vector<Level> levels, bool bounded, double tail_bound, double min_beta,
                   std::string label, int index_cutoff)
    : levels_(canonicalize(std::move(levels))),
      bounded_(bounded),
      tail_bound_(tail_bound),
      min_beta_(bounded ? -kInfinity : min_beta),
      label_(std::move(label)),
      index_cutoff_(index_cutoff) {
  if (!(tail_bound_ >= 0.0)) fail(ErrorCode::InvalidArgument, "tail bound must be nonnegative");
  if (!bounded_ && !(min_beta_ > 0.0))
    fail(ErrorCode::InvalidArgument, "truncated spectrum needs a positive certified beta");
}

double Spectrum::total_degeneracy() const {
  double total = 0.0;
  for (const auto& level : levels_) total += level.degeneracy;
  return total;
}

double Spectrum::log_ground_degeneracy() const { return std::log(levels_.front().degeneracy); }

double Spectrum::log_top_degeneracy() const {
  return bounded_ ? std::log(levels_.back().degeneracy) : kInfinity;
}

double Spectrum::log_total_degeneracy() const {
  return bounded_ ? std::log(total_degeneracy()) : kInfinity;
}

void Spectrum::check_beta(double b) const {
  if (!std::isfinite(b)) fail(ErrorCode::InvalidArgument, "inverse temperature must be finite");
  if (b < 0.0 && !bounded_)
    fail(ErrorCode::NegativeBetaUnbounded, "negative temperature requires a bounded spectrum");
  if (tail_bound_ >= kMaxTailBound)
    fail(ErrorCode::TruncationTooCoarse,
         "spectrum '" + label_ + "' truncation tail bound is not below 1e-10");
  if (b < min_beta_ * (1.0 - 1e-12))
    fail(ErrorCode::TruncationTooCoarse,
         "temperature above the certified range of spectrum '" + label_ + "'");
}

CanonicalSummary Spectrum::summary(double b) const {
  check_beta(b);
  const double e0 = levels_.front().energy;
  const double etop = levels_.back().energy;
  const bool from_ground = b >= 0.0;
  const double ref = from_ground ? e0 : etop;
  const std::size_t anchor = from_ground ? 0 : levels_.size() - 1;

  long double z = 0.0L, rest = 0.0L, first = 0.0L;
  for (std::size_t j = 0; j < levels_.size(); ++j) {
    const long double w = levels_[j].degeneracy * std::exp(-b * (levels_[j].energy - ref));
    z += w;
    if (j != anchor) rest += w;
    first += w * (levels_[j].energy - ref);
  }
  const long double mean_rel = first / z;

  long double var = 0.0L, excess = 0.0L, deficit = 0.0L;
  for (const auto& level : levels_) {
    const long double w = level.degeneracy * std::exp(-b * (level.energy - ref));
    const long double d = (level.energy - ref) - mean_rel;
    var += w * d * d;
    if (from_ground) {
      deficit += w * (etop - level.energy);
    } else {
      excess += w * (level.energy - e0);
    }
  }

  CanonicalSummary s;
  s.b = b;
  s.variance = static_cast<double>(var / z);
  s.log_partition = -b * ref + std::log(static_cast<double>(z));
  const double g_anchor = levels_[anchor].degeneracy;
  const double rel_entropy =
      static_cast<double>(b * mean_rel) + std::log1p(static_cast<double>(rest / g_anchor));
  if (from_ground) {
    s.excess = static_cast<double>(mean_rel);
    s.energy = e0 + s.excess;
    s.entropy_above_ground = rel_entropy;
    s.entropy = std::log(g_anchor) + rel_entropy;
    if (bounded_) {
      s.deficit = static_cast<double>(deficit / z);
      s.entropy_below_top = s.entropy - log_top_degeneracy();
    }
  } else {
    s.deficit = static_cast<double>(-mean_rel);
    s.energy = etop - s.deficit;
    s.excess = static_cast<double>(excess / z);
    s.entropy_below_top = rel_entropy;
    s.entropy = std::log(g_anchor) + rel_entropy;
    s.entropy_above_ground = s.entropy - log_ground_degeneracy();
  }
  return s;
}

std::vector<double> Spectrum::canonical_probabilities(double b) const {
  check_beta(b);
  const double ref = b >= 0.0 ? levels_.front().energy : levels_.back().energy;
  std::vector<double> p(levels_.size());
  long double z = 0.0L;
  for (std::size_t j = 0; j < levels_.size(); ++j) {
    p[j] = levels_[j].degeneracy * std::exp(-b * (levels_[j].energy - ref));
    z += p[j];
  }
  for (auto& x : p) x = static_cast<double>(x / z);
  return p;
}

Spectrum Spectrum::scaled_spectrum(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor))
    fail(ErrorCode::InvalidArgument, "energy scale factor must be positive");
  std::vector<Level> levels = levels_;
  for (auto& level : levels) level.energy *= factor;
  return Spectrum(std::move(levels), bounded_, tail_bound_,
                  bounded_ ? -kInfinity : min_beta_ / factor, label_, index_cutoff_);
}

std::shared_ptr<const CanonicalModel> Spectrum::scaled(double factor) const {
  return std::make_shared<Spectrum>(scaled_spectrum(factor));
}

Spectrum Spectrum::with_label(std::string label) const {
  Spectrum copy = *this;
  copy.label_ = std::move(label);
  return copy;
}

// ---------------------------------------------------------- SpectrumProduct

SpectrumProduct::SpectrumProduct(std::vector<Factor> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) fail(ErrorCode::InvalidArgument, "product needs at least one factor");
  for (const auto& f : factors_) {
    if (!f.spectrum) fail(ErrorCode::InvalidArgument, "null factor spectrum");
    if (!(f.count > 0.0) || !std::isfinite(f.count))
      fail(ErrorCode::InvalidArgument, "factor count must be positive");
  }
}

CanonicalSummary SpectrumProduct::summary(double b) const {
  CanonicalSummary total;
  total.b = b;
  total.deficit = 0.0;
  total.entropy_below_top = 0.0;
  for (const auto& f : factors_) {
    const CanonicalSummary s = f.spectrum->summary(b);
    total.log_partition += f.count * s.log_partition;
    total.energy += f.count * s.energy;
    total.variance += f.count * s.variance;
    total.entropy += f.count * s.entropy;
    total.excess += f.count * s.excess;
    total.deficit += f.count * s.deficit;
    total.entropy_above_ground += f.count * s.entropy_above_ground;
    total.entropy_below_top += f.count * s.entropy_below_top;
  }
  return total;
}

double SpectrumProduct::ground_energy() const {
  double e = 0.0;
  for (const auto& f : factors_) e += f.count * f.spectrum->ground_energy();
  return e;
}

double SpectrumProduct::top_energy() const {
  double e = 0.0;
  for (const auto& f : factors_) e += f.count * f.spectrum->top_energy();
  return e;
}

bool SpectrumProduct::bounded() const {
  return std::all_of(factors_.begin(), factors_.end(),
                     [](const Factor& f) { return f.spectrum->bounded(); });
}

double SpectrumProduct::min_beta() const {
  double b = -kInfinity;
  for (const auto& f : factors_) b = std::max(b, f.spectrum->min_beta());
  return b;
}

double SpectrumProduct::tail_bound() const {
  double t = 0.0;
  for (const auto& f : factors_) t += f.count * f.spectrum->tail_bound();
  return t;
}

double SpectrumProduct::log_ground_degeneracy() const {
  double g = 0.0;
  for (const auto& f : factors_) g += f.count * f.spectrum->log_ground_degeneracy();
  return g;
}

double SpectrumProduct::log_top_degeneracy() const {
  double g = 0.0;
  for (const auto& f : factors_) g += f.count * f.spectrum->log_top_degeneracy();
  return g;
}

double SpectrumProduct::log_total_degeneracy() const {
  double g = 0.0;
  for (const auto& f : factors_) g += f.count * f.spectrum->log_total_degeneracy();
  return g;
}

std::shared_ptr<const CanonicalModel> SpectrumProduct::scaled(double factor) const {
  std::vector<Factor> factors;
  factors.reserve(factors_.size());
  for (const auto& f : factors_)
    factors.push_back({std::make_shared<Spectrum>(f.spectrum->scaled_spectrum(factor)), f.count});
  return std::make_shared<SpectrumProduct>(std::move(factors));
}

// ----------------------------------------------------------------- builders

BoxGeometry BoxGeometry::cube(double mass, double volume) {
  const double side = std::cbrt(volume);
  return {mass, {side, side, side}};
}

Spectrum build_finite(std::vector<Level> levels, std::string label) {
  return Spectrum(std::move(levels), true, 0.0, -kInfinity, std::move(label));
}

double oscillator_tail_bound(double hnu, int n_levels, double b) {
  return 1.0 / std::expm1(b * hnu * n_levels);
}

Spectrum build_oscillator(double hnu, int n_levels, const TruncationPolicy& policy) {
  if (!(hnu > 0.0) || !std::isfinite(hnu))
    fail(ErrorCode::InvalidArgument, "oscillator quantum must be positive");
  if (n_levels < 2) fail(ErrorCode::InvalidArgument, "oscillator needs at least 2 levels");
  const double b = resolve_beta(policy, 10.0 * hnu);
  const double tail = oscillator_tail_bound(hnu, n_levels, b);
  if (!(tail < policy.tail_tolerance))
    fail(ErrorCode::TruncationTooCoarse, "oscillator truncated at " + std::to_string(n_levels) +
                                             " levels leaves too much tail mass");
  std::vector<Level> levels;
  levels.reserve(static_cast<std::size_t>(n_levels));
  for (int j = 0; j < n_levels; ++j) levels.push_back({(j + 0.5) * hnu, 1.0});
  return Spectrum(std::move(levels), false, tail, b, "oscillator");
}

int oscillator_levels_for(double hnu, const TruncationPolicy& policy) {
  if (!(hnu > 0.0)) fail(ErrorCode::InvalidArgument, "oscillator quantum must be positive");
  const double b = resolve_beta(policy, 10.0 * hnu);
  const double tol = policy.tail_tolerance;
  int n = std::max(2, static_cast<int>(std::log1p(1.0 / tol) / (b * hnu)));
  while (n > 2 && oscillator_tail_bound(hnu, n - 1, b) < tol) --n;
  while (!(oscillator_tail_bound(hnu, n, b) < tol)) ++n;
  return n;
}

Spectrum build_oscillator_auto(double hnu, const TruncationPolicy& policy) {
  return build_oscillator(hnu, oscillator_levels_for(hnu, policy), policy);
}

namespace {

double box_unit(double mass, double side, const UnitSystem& units) {
  if (!(mass > 0.0) || !(side > 0.0)) fail(ErrorCode::InvalidArgument, "mass and side must be positive");
  return units.h * units.h / (8.0 * mass * side * side);
}

// Neglected/kept ratio for sum_{j>=1} exp(-alpha j^2) truncated at max_q,
// with the geometric bound exp(-alpha (M+1)^2) / (1 - exp(-2 alpha (M+1))).
double direction_tail(double alpha, int max_q) {
  long double kept = 0.0L;
  for (int j = 1; j <= max_q; ++j) kept += std::exp(-alpha * (double(j) * j - 1.0));
  const double m1 = max_q + 1.0;
  const double tail = std::exp(-alpha * (m1 * m1 - 1.0)) / -std::expm1(-2.0 * alpha * m1);
  return tail / static_cast<double>(kept);
}

}  // namespace

double box_direction_tail_bound(double mass, double side, int max_q, const UnitSystem& units,
                                double b) {
  return direction_tail(b * box_unit(mass, side, units), max_q);
}

int box_direction_levels_for(double mass, double side, const UnitSystem& units,
                             const TruncationPolicy& policy) {
  const double unit = box_unit(mass, side, units);
  const double b = resolve_beta(policy, 10.0 * 3.0 * unit);
  const double alpha = b * unit;
  const double tol = policy.tail_tolerance;
  int hi = std::max(2, static_cast<int>(std::ceil(std::sqrt(std::log(1.0 / tol) / alpha))) + 2);
  while (!(direction_tail(alpha, hi) < tol)) hi *= 2;
  int lo = 1;  // invariant: tail(lo) >= tol or lo == 1
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (direction_tail(alpha, mid) < tol) hi = mid; else lo = mid;
  }
  return std::max(2, hi);
}

Spectrum build_box_direction(double mass, double side, int max_q, const UnitSystem& units,
                             const TruncationPolicy& policy) {
  if (max_q < 2) fail(ErrorCode::InvalidArgument, "box cutoff must be at least 2");
  const double unit = box_unit(mass, side, units);
  const double b = resolve_beta(policy, 10.0 * 3.0 * unit);
  const double tail = direction_tail(b * unit, max_q);
  if (!(tail < policy.tail_tolerance))
    fail(ErrorCode::TruncationTooCoarse, "box direction cutoff too small for the temperature range");
  std::vector<Level> levels;
  levels.reserve(static_cast<std::size_t>(max_q));
  for (int j = 1; j <= max_q; ++j) levels.push_back({unit * double(j) * j, 1.0});
  return Spectrum(std::move(levels), false, tail, b, "box-direction", max_q);
}

Spectrum build_box(const BoxGeometry& geom, int max_q, const UnitSystem& units,
                   const TruncationPolicy& policy) {
  if (max_q < 2) fail(ErrorCode::InvalidArgument, "box cutoff must be at least 2");
  std::array<double, 3> unit{};
  double widest = 0.0;
  for (int i = 0; i < 3; ++i) {
    unit[i] = box_unit(geom.mass, geom.sides[i], units);
    widest = std::max(widest, 3.0 * unit[i]);
  }
  const double b = resolve_beta(policy, 10.0 * widest);
  double tail = 0.0;
  for (int i = 0; i < 3; ++i) tail += direction_tail(b * unit[i], max_q);
  if (!(tail < policy.tail_tolerance))
    fail(ErrorCode::TruncationTooCoarse, "box cutoff too small for the temperature range");

  std::vector<Level> levels;
  levels.reserve(static_cast<std::size_t>(max_q) * max_q * max_q);
  for (int j1 = 1; j1 <= max_q; ++j1)
    for (int j2 = 1; j2 <= max_q; ++j2)
      for (int j3 = 1; j3 <= max_q; ++j3)
        levels.push_back({unit[0] * double(j1) * j1 + unit[1] * double(j2) * j2 +
                              unit[2] * double(j3) * j3,
                          1.0});
  return Spectrum(std::move(levels), false, tail, b, "box", max_q);
}

SpectrumProduct box_product(const BoxGeometry& geom, const UnitSystem& units,
                            const TruncationPolicy& policy, double count) {
  double widest = 0.0;
  for (double side : geom.sides) widest = std::max(widest, 3.0 * box_unit(geom.mass, side, units));
  TruncationPolicy common = policy;
  if (!common.max_temperature) common.max_temperature = 10.0 * widest;
  std::vector<SpectrumProduct::Factor> factors;
  for (double side : geom.sides) {
    const int m = box_direction_levels_for(geom.mass, side, units, common);
    factors.push_back(
        {std::make_shared<Spectrum>(build_box_direction(geom.mass, side, m, units, common)), count});
  }
  return SpectrumProduct(std::move(factors));
}

Spectrum compose(const Spectrum& a, const Spectrum& b, double cutoff,
                 std::optional<double> max_temperature) {
  if (std::isnan(cutoff) || cutoff < a.ground_energy() + b.ground_energy())
    fail(ErrorCode::CutoffBelowGround, "composite cutoff is below the composite ground energy");
  const auto& la = a.levels();
  const auto& lb = b.levels();

  std::vector<Level> pairs;
  std::vector<std::size_t> kept_count(la.size(), 0);
  bool pruned = false;
  for (std::size_t i = 0; i < la.size(); ++i) {
    std::size_t k = 0;
    for (; k < lb.size(); ++k) {
      const double e = la[i].energy + lb[k].energy;
      if (e > cutoff) break;
      pairs.push_back({e, la[i].degeneracy * lb[k].degeneracy});
    }
    kept_count[i] = k;
    if (k < lb.size()) pruned = true;
  }
  if (pairs.empty()) fail(ErrorCode::CutoffBelowGround, "cutoff leaves no composite levels");

  const bool bounded = a.bounded() && b.bounded() && !pruned;
  const std::string label = "(" + a.label() + ")x(" + b.label() + ")";
  if (bounded) return Spectrum(std::move(pairs), true, 0.0, -kInfinity, label);

  Spectrum merged(pairs, true, 0.0, -kInfinity, label);  // canonical order for the gap rule
  double beta = std::max(a.min_beta(), b.min_beta());
  if (max_temperature) beta = std::max(beta, 1.0 / *max_temperature);
  if (!std::isfinite(beta)) beta = default_beta_from_gaps(merged.levels());

  double pruned_ratio = 0.0;
  if (pruned && std::isfinite(beta)) {
    std::vector<long double> suffix(lb.size() + 1, 0.0L);
    for (std::size_t k = lb.size(); k-- > 0;)
      suffix[k] = suffix[k + 1] +
                  lb[k].degeneracy * std::exp(-beta * (lb[k].energy - lb.front().energy));
    long double kept = 0.0L, lost = 0.0L;
    for (std::size_t i = 0; i < la.size(); ++i) {
      const long double wa = la[i].degeneracy * std::exp(-beta * (la[i].energy - la.front().energy));
      kept += wa * (suffix[0] - suffix[kept_count[i]]);
      lost += wa * suffix[kept_count[i]];
    }
    pruned_ratio = static_cast<double>(lost / kept);
  }
  const double tail = a.tail_bound() + b.tail_bound() + pruned_ratio;
  return Spectrum(std::move(pairs), false, tail, std::isfinite(beta) ? beta : 1.0, label);
}

Spectrum compose_power(const Spectrum& s, int z, double cutoff,
                       std::optional<double> max_temperature) {
  if (z < 1) fail(ErrorCode::InvalidArgument, "composition power must be at least 1");
  Spectrum result = s;
  for (int i = 1; i < z; ++i) result = compose(result, s, cutoff, max_temperature);
  return result;
}

}  // namespace ses
