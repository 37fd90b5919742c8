#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "fda/features.hpp"
#include "fda/subject.hpp"

namespace fda {

/// Smoothing value substituted for alpha = 0 so that unseen features keep
/// finite log-probabilities.
inline constexpr double kAlphaFloor = 1e-10;

struct LabeledVector {
  FeatureVector features;
  SubjectId subject = 0;
};

/// Probability of each subject given one document, normalized over subjects.
struct Posterior {
  std::vector<double> probabilities;
  bool degenerate = false;  // document had no in-vocabulary features
};

/// Argmax; ties go to the lowest subject id.
SubjectId argmax_subject(std::span<const double> scores);

// ---------------------------------------------------------------------------
// Multinomial naive Bayes
// ---------------------------------------------------------------------------

struct MnbModel {
  Vocabulary vocab;
  std::vector<Subject> subjects;
  double alpha = 0.0;                       // as requested; 0 is trained with kAlphaFloor
  std::vector<std::uint64_t> subject_totals;  // N_s: in-vocabulary feature count per subject
  std::vector<double> log_params;           // feature-major: [f * S + s] = log p(f | s)

  std::size_t subject_count() const { return subjects.size(); }
  double log_param(FeatureId f, SubjectId s) const { return log_params[f * subjects.size() + s]; }
  double effective_alpha() const { return alpha > 0.0 ? alpha : kAlphaFloor; }
};

/// p(f|s) = (N_{f,s} + alpha) / (N_s + alpha * |vocab|), stored as logs.
/// Throws DataError if a subject has no training vectors.
MnbModel mnb_train(std::span<const LabeledVector> train, Vocabulary vocab, double alpha,
                   std::vector<Subject> subjects);

/// Per-subject sum of count * log p(f|s). The multinomial coefficient is the
/// same for every subject and is left out.
std::vector<double> mnb_log_likelihoods(const MnbModel& model, const FeatureVector& doc);

/// Uniform-prior posterior via log-sum-exp normalization.
Posterior mnb_posterior(const MnbModel& model, const FeatureVector& doc);
SubjectId mnb_attribute(const MnbModel& model, const FeatureVector& doc);

// ---------------------------------------------------------------------------
// Poisson naive Bayes (benchmark)
// ---------------------------------------------------------------------------

struct PnbModel {
  Vocabulary vocab;
  std::vector<Subject> subjects;
  double alpha = 0.0;
  std::vector<std::uint64_t> doc_counts;  // D_s
  std::vector<double> rates;              // feature-major: [f * S + s] = lambda
  std::vector<double> log_rates;
  std::vector<double> rate_sums;          // sum_f lambda_{f,s}

  std::size_t subject_count() const { return subjects.size(); }
  double rate(FeatureId f, SubjectId s) const { return rates[f * subjects.size() + s]; }
  double effective_alpha() const { return alpha > 0.0 ? alpha : kAlphaFloor; }
};

/// lambda_{f,s} = (N_{f,s} + alpha) / D_s, alpha = 0 floored as for MNB.
PnbModel pnb_train(std::span<const LabeledVector> train, Vocabulary vocab, double alpha,
                   std::vector<Subject> subjects);

/// Per-subject sum over the vocabulary of N_f log(lambda) - lambda.
std::vector<double> pnb_log_likelihoods(const PnbModel& model, const FeatureVector& doc);
Posterior pnb_posterior(const PnbModel& model, const FeatureVector& doc);

// ---------------------------------------------------------------------------
// Either classifier, with persistence
// ---------------------------------------------------------------------------

using Classifier = std::variant<MnbModel, PnbModel>;

const Vocabulary& vocabulary(const Classifier& c);
const std::vector<Subject>& subjects(const Classifier& c);
Posterior posterior(const Classifier& c, const FeatureVector& doc);

/// Versioned text format. Reals are written as hexadecimal floating point so
/// a load reproduces every parameter bit for bit.
void save_model(std::ostream& os, const Classifier& c);
Classifier load_model(std::istream& is);

}  // namespace fda
