#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "fda/classifiers.hpp"
#include "fda/config.hpp"
#include "fda/corpus.hpp"
#include "fda/signature.hpp"

namespace fda {

// ---------------------------------------------------------------------------
// Building blocks shared by the commands
// ---------------------------------------------------------------------------

/// Feature extraction for many documents; errors name the failing document.
std::vector<FeatureCounts> extract_all(std::span<const Document* const> docs, const FeatureModel& model,
                                       unsigned threads);

/// Builds the vocabulary from `train` and fits the configured classifier.
Classifier train_classifier(std::span<const FeatureCounts> train, std::span<const SubjectId> labels,
                            std::vector<Subject> subjects, const ExperimentConfig& config);

/// Possibility-transformed stylome scores for a set of test documents.
struct StylomeScores {
  ScoreMatrix possibility;
  std::vector<SubjectId> truth;
  std::size_t degenerate_docs = 0;  // no in-vocabulary features
};

StylomeScores score_stylome(const Classifier& model, std::span<const FeatureCounts> test,
                            std::span<const SubjectId> truth, std::vector<std::string> item_ids);

/// Writes one metric bundle (scores, decisions, F-score sweep, recall, DET,
/// CMC, MSH, summary.json) under `dir` and returns the summary. Per-item
/// correctness is appended to `correct` when given.
nlohmann::json write_bundle(const std::filesystem::path& dir, const ScoreMatrix& scores,
                            std::span<const SubjectId> truth, const ExperimentConfig& config,
                            std::vector<int>* correct = nullptr);

/// Baseline signature scores of every probe against every writer's templates.
ScoreMatrix baseline_signature_matrix(const std::vector<std::vector<SignatureSample>>& templates,
                                      std::span<const SignatureSample> probes, std::vector<std::string> subjects,
                                      std::vector<std::string> items, double delta_alpha, unsigned threads,
                                      std::size_t* degenerate = nullptr);

/// Applies keep_largest from the config when it is nonzero.
Corpus load_configured_corpus(const std::filesystem::path& root, const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

/// Trains on the whole corpus; writes the model, vocabulary.tsv and
/// train_log.json. Returns the log.
nlohmann::json cmd_train(const ExperimentConfig& config);

/// Attributes a `.txt` file or every document of a per-subject directory.
/// Prints `doc_id<TAB>predicted` lines and writes attribution_scores.csv.
nlohmann::json cmd_attribute(const ExperimentConfig& config, const std::filesystem::path& input, std::ostream& out);

/// Baseline matcher over the chimeric signature split: writes
/// signature_scores.csv (probes x writers) and signature_truth.csv.
nlohmann::json cmd_sigscore(const ExperimentConfig& config);

/// Builds the chimeric dataset and writes chimeric_manifest.csv.
nlohmann::json cmd_chimeric(const ExperimentConfig& config);

/// Runs the configured protocol and writes every metric bundle plus
/// summary.json. Returns the summary.
nlohmann::json cmd_eval(const ExperimentConfig& config);

struct BenchOptions {
  std::vector<std::size_t> sizes;  // documents per synthetic corpus
  std::size_t repeats = 5;
  std::size_t subjects = 10;
  std::size_t tokens_per_doc = 200;
  std::size_t profile_size = 2000;
  double alpha = 0.01;
  FeatureModel features;
};

struct BenchReport {
  std::vector<std::size_t> sizes;
  std::vector<double> seconds;          // mean over repeats
  std::vector<double> doubling_ratios;  // time growth per doubling of size
  double slope = 0.0;                   // least-squares log-log slope

  nlohmann::json to_json() const;
};

/// Times feature extraction, training and scoring on synthetic corpora.
/// Throws ConfigError for fewer than two sizes.
BenchReport cmd_bench(const BenchOptions& options);

}  // namespace fda
