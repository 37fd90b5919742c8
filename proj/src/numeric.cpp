#include "fda/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fda {

double log_sum_exp(std::span<const double> x) {
  if (x.empty()) return -std::numeric_limits<double>::infinity();
  const double top = *std::max_element(x.begin(), x.end());
  if (std::isinf(top)) return top;
  double sum = 0.0;
  for (double v : x) sum += std::exp(v - top);
  return top + std::log(sum);
}

std::vector<double> softmax(std::span<const double> x) {
  std::vector<double> out(x.size());
  if (x.empty()) return out;
  const double top = *std::max_element(x.begin(), x.end());
  if (top == -std::numeric_limits<double>::infinity()) {
    std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(x.size()));
    return out;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = std::exp(x[i] - top);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

}  // namespace fda
