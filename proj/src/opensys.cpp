#include "ses/opensys.hpp"

#include <algorithm>
#include <cmath>

#include "ses/error.hpp"

namespace ses {

namespace {

void check_box(const OperatingBox& box) {
  if (!(box.b_min > 0.0) || !(box.b_max >= box.b_min) || !std::isfinite(box.b_max))
    fail(ErrorCode::InvalidArgument, "operating box needs 0 < b_min <= b_max < inf");
  if (!std::isfinite(box.mu_max)) fail(ErrorCode::InvalidArgument, "operating box mu_max must be finite");
}

// Smallest z_max whose relative neglected mass is below tol, for log fugacity lx.
std::pair<int, double> truncate_family(double lx, Counting counting, double tol) {
  if (counting == Counting::distinguishable) {
    if (!(lx < 0.0))
      fail(ErrorCode::OperatingBoxExceeded, "fugacity reaches 1; the particle sum diverges");
    for (int z = 1; z < 10000000; ++z) {
      // x^(z+1) / (1 - x^(z+1)) relative to the kept geometric sum.
      const double tail = 1.0 / std::expm1(-(z + 1.0) * lx);
      if (tail < tol) return {z, tail};
    }
  } else {
    const double y = std::exp(lx);
    for (int z = std::max(1, static_cast<int>(std::ceil(y))); z < 10000000; ++z) {
      const double log_term = (z + 1.0) * lx - std::lgamma(z + 2.0) - y;
      const double tail = std::exp(log_term) / (1.0 - y / (z + 2.0));
      if (tail < tol) return {z, tail / (1.0 - tail)};
    }
  }
  fail(ErrorCode::OperatingBoxExceeded, "no particle-number cutoff meets the tail tolerance");
}

}  // namespace

GrandModel GrandModel::from_sectors(std::vector<std::shared_ptr<const CanonicalModel>> sectors,
                                    double volume, VolumeScaling scaling, OperatingBox box) {
  check_box(box);
  if (!(volume > 0.0)) fail(ErrorCode::InvalidArgument, "volume must be positive");
  GrandModel m;
  for (const auto& s : sectors) {
    if (!s) fail(ErrorCode::InvalidArgument, "null sector model");
    if (box.b_min < s->min_beta() * (1.0 - 1e-12))
      fail(ErrorCode::TruncationTooCoarse, "sector spectrum not certified over the operating box");
    m.tail_bound_ += s->tail_bound();
  }
  m.sectors_ = std::move(sectors);
  m.z_max_ = static_cast<int>(m.sectors_.size());
  m.volume_ = volume;
  m.scaling_ = scaling;
  m.box_ = box;
  return m;
}

GrandModel GrandModel::independent(std::shared_ptr<const CanonicalModel> single, Counting counting,
                                   double volume, VolumeScaling scaling, OperatingBox box,
                                   double tail_tolerance) {
  check_box(box);
  if (!single) fail(ErrorCode::InvalidArgument, "null single-particle model");
  if (!(volume > 0.0)) fail(ErrorCode::InvalidArgument, "volume must be positive");
  if (box.b_min < single->min_beta() * (1.0 - 1e-12))
    fail(ErrorCode::TruncationTooCoarse, "single-particle spectrum not certified over the box");
  // b mu + lnQ1(b) is convex in b, so its maximum over the box is at a corner.
  const double lx = std::max(box.b_min * box.mu_max + single->summary(box.b_min).log_partition,
                             box.b_max * box.mu_max + single->summary(box.b_max).log_partition);
  const auto [z_max, tail] = truncate_family(lx, counting, tail_tolerance);
  GrandModel m;
  m.single_ = std::move(single);
  m.counting_ = counting;
  m.family_ = true;
  m.z_max_ = z_max;
  m.volume_ = volume;
  m.tail_bound_ = tail + z_max * m.single_->tail_bound();
  m.tail_tolerance_ = tail_tolerance;
  m.scaling_ = scaling;
  m.box_ = box;
  return m;
}

GrandModel GrandModel::at_volume(double volume) const {
  if (!(volume > 0.0)) fail(ErrorCode::InvalidArgument, "volume must be positive");
  GrandModel m = *this;
  m.volume_ = volume;
  if (scaling_ == VolumeScaling::box) {
    const double factor = std::pow(volume_ / volume, 2.0 / 3.0);
    if (family_) m.single_ = single_->scaled(factor);
    for (auto& s : m.sectors_) s = s->scaled(factor);
  }
  return m;
}

GrandModel::Sector GrandModel::sector(int z, double b) const {
  const CanonicalSummary s = sectors_[static_cast<std::size_t>(z - 1)]->summary(b);
  return {s.log_partition, s.energy};
}

GrandPoint GrandModel::properties(double b, double mu) const {
  const double slack = 1e-12;
  if (!(b >= box_.b_min * (1.0 - slack)) || !(b <= box_.b_max * (1.0 + slack)) ||
      !(mu <= box_.mu_max + slack * std::max(1.0, std::fabs(box_.mu_max))) || !std::isfinite(mu))
    fail(ErrorCode::OperatingBoxExceeded, "(b, mu) outside the model's operating box");

  std::vector<double> log_w(static_cast<std::size_t>(z_max_) + 1), energy(log_w.size());
  log_w[0] = 0.0;
  energy[0] = 0.0;
  CanonicalSummary one;
  if (family_) one = single_->summary(b);
  for (int z = 1; z <= z_max_; ++z) {
    Sector s;
    if (family_) {
      s.log_partition = z * one.log_partition - (counting_ == Counting::boltzmann ? std::lgamma(z + 1.0) : 0.0);
      s.energy = z * one.energy;
    } else {
      s = sector(z, b);
    }
    log_w[static_cast<std::size_t>(z)] = b * mu * z + s.log_partition;
    energy[static_cast<std::size_t>(z)] = s.energy;
  }
  const double shift = *std::max_element(log_w.begin(), log_w.end());
  long double total = 0.0L;
  for (double l : log_w) total += std::exp(l - shift);

  GrandPoint g;
  g.b = b;
  g.mu = mu;
  g.log_partition = shift + std::log(static_cast<double>(total));
  long double n = 0.0L, n2 = 0.0L, e = 0.0L;
  for (std::size_t z = 0; z < log_w.size(); ++z) {
    const long double p = std::exp(log_w[z] - shift) / total;
    n += p * z;
    n2 += p * z * z;
    e += p * energy[z];
  }
  g.amount = static_cast<double>(n);
  g.amount_variance = static_cast<double>(n2 - n * n);
  g.energy = static_cast<double>(e);
  g.entropy = b * (g.energy - mu * g.amount) + g.log_partition;
  g.pressure = scaling_ == VolumeScaling::box ? (2.0 / 3.0) * g.energy / volume_ : 0.0;
  g.euler = g.pressure * volume_ - g.log_partition / b;
  return g;
}

GrandPoint grand_properties(const GrandModel& model, double b, double mu) {
  return model.properties(b, mu);
}

double fugacity_of_amount(const GrandModel& model, double b, double amount) {
  const double mu_hi = model.box().mu_max;
  const double n_hi = model.properties(b, mu_hi).amount;
  if (!(amount > 0.0) || !(amount < n_hi))
    fail(ErrorCode::AmountOutOfRange, "amount outside the attainable open interval at this b");

  double step = 1.0 / b;
  double lo = mu_hi - step, hi = mu_hi;
  while (model.properties(b, lo).amount >= amount) {
    hi = lo;
    step *= 2.0;
    lo -= step;
    if (!std::isfinite(lo)) fail(ErrorCode::AmountOutOfRange, "could not bracket the amount");
  }
  const double tol = 1e-12 * std::max(1.0, amount);
  double mu = 0.5 * (lo + hi);
  for (int it = 0; it < 300; ++it) {
    const GrandPoint g = model.properties(b, mu);
    const double r = g.amount - amount;
    if (std::fabs(r) < tol) return mu;
    if (r > 0) hi = mu; else lo = mu;
    if (hi - lo <= 4e-16 * std::max(std::fabs(lo), std::fabs(hi))) return mu;
    const double slope = b * g.amount_variance;
    const double newton = mu - r / slope;
    mu = (slope > 0 && newton > lo && newton < hi) ? newton : 0.5 * (lo + hi);
  }
  return mu;
}

}  // namespace ses
