#include "fda/possibility.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fda {

std::vector<double> to_possibility(std::span<const double> p, double tolerance) {
  const std::size_t n = p.size();
  if (n == 0) throw std::invalid_argument("possibility transform of an empty distribution");
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("probabilities must be finite and >= 0");
    total += v;
  }
  if (std::abs(total - 1.0) > tolerance) {
    throw std::invalid_argument("probabilities must sum to 1 (got " + std::to_string(total) + ")");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });

  // For a run of equal values starting at sorted position `start`:
  //   pi = (sum of strictly smaller values) + value * (n - start).
  std::vector<double> pi(n);
  double smaller = 0.0;
  double previous = 0.0;
  std::size_t start = 0;
  while (start < n) {
    const double value = p[order[start]];
    std::size_t end = start;
    while (end < n && p[order[end]] == value) ++end;
    double level = smaller + value * static_cast<double>(n - start);
    level = std::clamp(std::max(level, previous), 0.0, 1.0);
    if (end == n) level = 1.0;
    for (std::size_t i = start; i < end; ++i) pi[order[i]] = level;
    for (std::size_t i = start; i < end; ++i) smaller += value;
    previous = level;
    start = end;
  }
  return pi;
}

}  // namespace fda
