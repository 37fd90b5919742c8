#include "fda/fusion.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "fda/error.hpp"

namespace fda {

std::string_view to_string(FusionOperator op) {
  switch (op) {
    case FusionOperator::average: return "average";
    case FusionOperator::bounded_sum: return "sum";
    case FusionOperator::product: return "product";
  }
  return "average";
}

FusionOperator parse_fusion_operator(std::string_view text) {
  if (text == "average") return FusionOperator::average;
  if (text == "sum") return FusionOperator::bounded_sum;
  if (text == "product") return FusionOperator::product;
  throw ConfigError("unknown fusion operator '" + std::string(text) + "' (average|sum|product)");
}

std::vector<double> fuse(std::span<const double> stylome, std::span<const double> signature, FusionOperator op) {
  if (stylome.size() != signature.size()) {
    throw std::invalid_argument("cannot fuse score vectors of length " + std::to_string(stylome.size()) + " and " +
                                std::to_string(signature.size()));
  }
  std::vector<double> out(stylome.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double a = stylome[i];
    const double b = signature[i];
    if (!(a >= 0.0 && a <= 1.0) || !(b >= 0.0 && b <= 1.0)) {
      throw std::invalid_argument("fusion inputs must lie in [0, 1]");
    }
    switch (op) {
      case FusionOperator::average: out[i] = (a + b) / 2.0; break;
      case FusionOperator::bounded_sum: out[i] = std::min(1.0, a + b); break;
      case FusionOperator::product: out[i] = a * b; break;
    }
  }
  return out;
}

ScoreMatrix fuse(const ScoreMatrix& a, const ScoreMatrix& b, FusionOperator op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DataError("cannot fuse score matrices of different shape");
  std::vector<double> values;
  values.reserve(a.values().size());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto row = fuse(a.row(r), b.row(r), op);
    values.insert(values.end(), row.begin(), row.end());
  }
  return ScoreMatrix(a.subjects(), a.items(), std::move(values));
}

Decision decide(std::span<const double> fused) {
  if (fused.empty()) throw std::invalid_argument("cannot decide on an empty score vector");
  Decision d;
  for (std::size_t i = 1; i < fused.size(); ++i) {
    if (fused[i] > fused[d.subject]) d.subject = static_cast<SubjectId>(i);
  }
  for (std::size_t i = 0; i < fused.size(); ++i) {
    if (static_cast<SubjectId>(i) != d.subject && fused[i] == fused[d.subject]) d.tie = true;
  }
  return d;
}

}  // namespace fda
