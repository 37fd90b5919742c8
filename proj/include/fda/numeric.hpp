#pragma once

#include <span>
#include <vector>

namespace fda {

// log(sum(exp(x))), stable for large magnitudes. -inf for empty input.
double log_sum_exp(std::span<const double> x);

// exp(x - log_sum_exp(x)). Uniform when every entry is -inf.
std::vector<double> softmax(std::span<const double> x);

}  // namespace fda
