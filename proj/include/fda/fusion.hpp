#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "fda/signature.hpp"
#include "fda/subject.hpp"

namespace fda {

enum class FusionOperator {
  average,      // (a + b) / 2
  bounded_sum,  // min(1, a + b)
  product,      // a * b
};

std::string_view to_string(FusionOperator op);
FusionOperator parse_fusion_operator(std::string_view text);

/// Elementwise score-level fusion of two fuzzy score vectors in [0, 1].
/// Throws std::invalid_argument on length mismatch or out-of-range input.
std::vector<double> fuse(std::span<const double> stylome, std::span<const double> signature,
                         FusionOperator op = FusionOperator::average);

/// Row-wise fuse of two matrices with identical shape; labels come from `a`.
ScoreMatrix fuse(const ScoreMatrix& a, const ScoreMatrix& b, FusionOperator op = FusionOperator::average);

struct Decision {
  SubjectId subject = 0;
  bool tie = false;  // another subject shares the maximal score
};

/// Subject with the maximal fused score, lowest id on ties.
Decision decide(std::span<const double> fused);

}  // namespace fda
