#include "ses/states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ses/error.hpp"

namespace ses {

LevelDistribution make_state(std::shared_ptr<const Spectrum> spectrum, std::vector<double> probs) {
  if (!spectrum) fail(ErrorCode::InvalidArgument, "state needs a spectrum");
  if (probs.size() != spectrum->size())
    fail(ErrorCode::LengthMismatch, "state has " + std::to_string(probs.size()) +
                                        " probabilities for " + std::to_string(spectrum->size()) +
                                        " levels");
  long double sum = 0.0L;
  for (double p : probs) {
    if (!std::isfinite(p)) fail(ErrorCode::InvalidArgument, "probability is not finite");
    if (p < 0.0) fail(ErrorCode::NegativeProbability, "negative probability");
    sum += p;
  }
  const double total = static_cast<double>(sum);
  if (std::fabs(total - 1.0) > 1e-9)
    fail(ErrorCode::NotNormalized, "probabilities sum to " + std::to_string(total));
  LevelDistribution state{std::move(spectrum), std::move(probs), 0.0};
  if (total != 1.0) {
    for (auto& p : state.probs) p /= total;
    state.normalization_adjustment = total - 1.0;
  }
  return state;
}

double state_energy(const LevelDistribution& state) {
  double e = 0.0;
  for (std::size_t j = 0; j < state.size(); ++j) e += state.probs[j] * (*state.spectrum)[j].energy;
  return e;
}

double state_entropy(const LevelDistribution& state) {
  double s = 0.0;
  for (std::size_t j = 0; j < state.size(); ++j) {
    const double p = state.probs[j];
    if (p > 0.0) s -= p * std::log(p / (*state.spectrum)[j].degeneracy);
  }
  return s;
}

double state_variance(const LevelDistribution& state) {
  const double mean = state_energy(state);
  double v = 0.0;
  for (std::size_t j = 0; j < state.size(); ++j) {
    const double d = (*state.spectrum)[j].energy - mean;
    v += state.probs[j] * d * d;
  }
  return v;
}

Observables observables(const LevelDistribution& state, const SesEntropyOfEnergy& ses_entropy) {
  Observables o;
  o.energy = state_energy(state);
  o.entropy = state_entropy(state);
  o.variance = state_variance(state);
  o.disequilibrium = std::max(0.0, ses_entropy(*state.spectrum, o.energy) - o.entropy);
  return o;
}

LevelDistribution passive_sort(const LevelDistribution& state) {
  const Spectrum& spec = *state.spectrum;
  struct Block {
    double density;
    double mass;
    double prob;
  };
  std::vector<Block> blocks;
  blocks.reserve(state.size());
  for (std::size_t j = 0; j < state.size(); ++j)
    blocks.push_back({state.probs[j] / spec[j].degeneracy, spec[j].degeneracy, state.probs[j]});
  std::stable_sort(blocks.begin(), blocks.end(),
                   [](const Block& x, const Block& y) { return x.density > y.density; });

  LevelDistribution out{state.spectrum, std::vector<double>(state.size(), 0.0), 0.0};
  std::size_t level = 0;
  double room = spec[0].degeneracy;
  for (const auto& block : blocks) {
    double left = block.mass;
    while (left > 0.0 && level < state.size()) {
      const double take = std::min(left, room);
      out.probs[level] += take == block.mass ? block.prob : block.density * take;
      left -= take;
      room -= take;
      if (room <= 1e-12 * spec[level].degeneracy) {
        ++level;
        if (level < state.size()) room = spec[level].degeneracy;
      }
    }
  }
  return out;
}

LevelDistribution product_state(const LevelDistribution& a, const LevelDistribution& b) {
  auto spectrum = std::make_shared<Spectrum>(compose(*a.spectrum, *b.spectrum));
  const auto& levels = spectrum->levels();
  const double tol = 1e-12 * (levels.back().energy - levels.front().energy);
  std::vector<double> probs(levels.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < b.size(); ++k) {
      const double e = (*a.spectrum)[i].energy + (*b.spectrum)[k].energy;
      auto it = std::lower_bound(levels.begin(), levels.end(), e - tol,
                                 [](const Level& l, double x) { return l.energy < x; });
      if (it == levels.end()) --it;
      probs[static_cast<std::size_t>(it - levels.begin())] += a.probs[i] * b.probs[k];
    }
  }
  return LevelDistribution{std::move(spectrum), std::move(probs), 0.0};
}

}  // namespace ses
