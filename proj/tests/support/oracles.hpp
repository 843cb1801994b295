#pragma once

// Independent reference computations used by the tests. They work on plain
// (energy, degeneracy) vectors in long double without any of the library's
// shifting or tail bookkeeping.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

struct Point {
  long double lnq, energy, entropy, variance;
};

inline Point canonical(const std::vector<std::pair<double, double>>& levels, double b) {
  long double shift = -INFINITY;
  for (auto [e, g] : levels) shift = std::max(shift, -(long double)b * e);
  long double z = 0, m1 = 0;
  for (auto [e, g] : levels) {
    const long double w = g * std::exp(-(long double)b * e - shift);
    z += w;
    m1 += w * e;
  }
  const long double mean = m1 / z;
  long double var = 0;
  for (auto [e, g] : levels) {
    const long double w = g * std::exp(-(long double)b * e - shift);
    var += w * (e - mean) * (e - mean);
  }
  Point p;
  p.lnq = std::log(z) + shift;
  p.energy = mean;
  p.variance = var / z;
  p.entropy = b * mean + p.lnq;
  return p;
}

inline long double entropy_of(const std::vector<double>& p, const std::vector<double>& g) {
  long double s = 0;
  for (std::size_t j = 0; j < p.size(); ++j)
    if (p[j] > 0) s -= (long double)p[j] * std::log((long double)p[j] / g[j]);
  return s;
}

// Plain bisection of a monotone function on [lo, hi].
template <class F>
double bisect(F f, double lo, double hi, int iterations = 200) {
  const bool rising = f(hi) > f(lo);
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((f(mid) > 0) == rising) hi = mid; else lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Minimum of sum p_sigma(j) e_j over all permutations (brute force).
inline double min_permutation_energy(std::vector<double> p, const std::vector<double>& e) {
  std::sort(p.begin(), p.end());
  double best = INFINITY;
  do {
    double s = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) s += p[j] * e[j];
    best = std::min(best, s);
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

}  // namespace oracle
