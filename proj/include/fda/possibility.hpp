#pragma once

#include <span>
#include <vector>

namespace fda {

/// Dubois-Prade probability-to-possibility transform:
///   pi_j = sum_a min(p_a, p_j).
/// Runs in O(S log S) by sorting; the subject(s) of maximal probability get
/// exactly 1. Throws std::invalid_argument for negative entries or a total
/// further than `tolerance` from 1.
std::vector<double> to_possibility(std::span<const double> probabilities, double tolerance = 1e-6);

}  // namespace fda
