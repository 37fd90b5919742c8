#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fda/signature.hpp"
#include "fda/subject.hpp"

namespace fda {

// ---------------------------------------------------------------------------
// Accuracy
// ---------------------------------------------------------------------------

enum class CiMethod { student_t_over_folds, wald_over_items };

struct AccuracyReport {
  double accuracy = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t n = 0;  // items, or folds for the t interval
  CiMethod method = CiMethod::wald_over_items;
  bool degenerate = false;  // interval could not be formed (single fold)
};

/// Fraction of (predicted, true) pairs that agree, with a 95% Wald interval.
AccuracyReport accuracy(std::span<const std::pair<SubjectId, SubjectId>> decisions);

/// Mean of per-fold accuracies with a 95% Student-t interval (df = k - 1).
AccuracyReport accuracy_over_folds(std::span<const double> fold_accuracies);

// ---------------------------------------------------------------------------
// Claims
// ---------------------------------------------------------------------------

struct Claim {
  std::size_t item = 0;
  SubjectId claimed = 0;
  double score = 0.0;
  bool genuine = false;
};

struct ClaimSet {
  std::vector<Claim> claims;
  std::size_t genuine_count = 0;
  std::size_t imposter_count = 0;
};

/// Every (item, subject) cell becomes a claim; it is genuine iff the subject
/// is the item's true subject.
ClaimSet expand_claims(const ScoreMatrix& scores, std::span<const SubjectId> truth);

/// Thresholds i / steps for i = 0..steps.
std::vector<double> threshold_grid(std::size_t steps = 100);

struct FScore {
  double value = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  bool undefined = false;  // tp = fp = fn = 0
};

/// Accepts claims with score >= threshold; F = 2TP / (2TP + FP + FN).
FScore fscore(const ClaimSet& claims, double threshold);

// ---------------------------------------------------------------------------
// Curves
// ---------------------------------------------------------------------------

struct CurvePoint {
  double parameter = 0.0;  // threshold or rank
  double x = 0.0;
  double y = 0.0;
};

struct Curve {
  std::string parameter_label;
  std::string x_label;
  std::string y_label;
  std::vector<CurvePoint> points;
  double area = 0.0;  // trapezoid area under y(x); only set for DET
};

/// F-score against threshold.
Curve fscore_curve(const ClaimSet& claims, std::span<const double> grid);

/// recall(t) = TP(t) / (TP(t) + FN(t)). Throws if there are no genuine claims.
Curve recall_curve(const ClaimSet& claims, std::span<const double> grid);

/// (FAR, FRR) per threshold, with the trapezoid area along the sweep.
Curve det_curve(const ClaimSet& claims, std::span<const double> grid);

/// FAR and FRR at one threshold.
std::pair<double, double> det_point(const ClaimSet& claims, double threshold);

/// Rank of the true subject in each row under a descending sort. Equal
/// scores count against the true subject (it takes the worst tied rank).
std::vector<std::size_t> genuine_ranks(const ScoreMatrix& scores, std::span<const SubjectId> truth);

/// CMC(k) = fraction of items whose true subject ranks <= k, k = 1..S.
Curve cmc_curve(const ScoreMatrix& scores, std::span<const SubjectId> truth);

// ---------------------------------------------------------------------------
// Match score histograms
// ---------------------------------------------------------------------------

struct ScoreHistogram {
  std::vector<double> genuine;   // relative frequencies
  std::vector<double> imposter;
  double overlap = 0.0;          // sum_b min(genuine_b, imposter_b)
  std::size_t bins() const { return genuine.size(); }
};

/// Equal-width bins over [0, 1]; a score of exactly 1 falls in the last bin.
std::size_t histogram_bin(double score, std::size_t bins);
ScoreHistogram msh(const ClaimSet& claims, std::size_t bins = 20);

// ---------------------------------------------------------------------------
// Significance
// ---------------------------------------------------------------------------

struct TTestResult {
  double t = 0.0;
  double p_value = 1.0;  // two-sided
  std::size_t df = 0;
  bool degenerate = false;  // zero variance of the differences
};

/// Paired Student t-test on per-item 0/1 correctness.
TTestResult paired_ttest(std::span<const int> correct_a, std::span<const int> correct_b);

// ---------------------------------------------------------------------------
// CSV I/O
// ---------------------------------------------------------------------------

void write_curve_csv(std::ostream& os, const Curve& curve);
Curve read_curve_csv(std::istream& is);
void write_histogram_csv(std::ostream& os, const ScoreHistogram& h);
ScoreHistogram read_histogram_csv(std::istream& is);

}  // namespace fda
