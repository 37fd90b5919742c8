#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fda/features.hpp"
#include "fda/fusion.hpp"

namespace fda {

enum class ClassifierKind { mnb, pnb };
enum class Protocol { rolling, chimeric, holdout };
enum class SignatureSource { baseline, matrix };

std::string_view to_string(ClassifierKind kind);
std::string_view to_string(Protocol protocol);

/// Environment variable that overrides the `output` key.
inline constexpr const char* kOutputDirEnv = "FDA_OUTPUT_DIR";

/// Every experiment parameter, settable as `key = value` in a config file
/// or with `--set key=value` on the command line.
struct ExperimentConfig {
  // data
  std::filesystem::path corpus;       // per-subject text directories
  std::filesystem::path test_corpus;  // holdout/chimeric test split (optional)
  std::filesystem::path signatures;   // SVC-format directory
  std::filesystem::path signature_matrix;
  std::filesystem::path external_matrix;  // e.g. SVM posteriors for the test items
  std::string external_name = "svm";
  bool external_is_probability = true;

  // stylome
  FeatureModel features;
  std::size_t profile_size = 10000;
  ClassifierKind classifier = ClassifierKind::mnb;
  double alpha = 0.01;

  // protocol
  Protocol protocol = Protocol::rolling;
  std::size_t train_window = 8;
  std::size_t test_window = 5;
  std::size_t keep_largest = 0;  // 0 keeps every document
  std::size_t chimeric_train = 5;
  std::size_t chimeric_test = 15;

  // signature and fusion
  SignatureSource signature_source = SignatureSource::baseline;
  double delta_alpha = 25.0;
  FusionOperator fusion = FusionOperator::average;

  // metrics
  std::size_t msh_bins = 20;
  std::size_t grid_steps = 100;

  // run
  std::filesystem::path output = "fda-out";
  std::filesystem::path model;  // defaults to <output>/model.fda
  unsigned threads = 1;
  std::uint64_t seed = 0;  // reserved; every stage is deterministic

  /// Applies one key. Returns an error message instead of throwing so that
  /// callers can report every bad key at once.
  std::string set(std::string_view key, std::string_view value);

  std::filesystem::path model_path() const { return model.empty() ? output / "model.fda" : model; }
};

/// Keys accepted by ExperimentConfig::set, in documentation order.
const std::vector<std::string_view>& config_keys();

/// Parses `key = value` lines (`#` starts a comment).
std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view text,
                                                                   std::vector<std::string>& errors);

/// Builds a config from an optional file, then the output-directory
/// environment override, then `key=value` overrides. Throws ConfigError
/// listing every problem found.
ExperimentConfig load_config(const std::filesystem::path& file, const std::vector<std::string>& overrides);

enum class Command { train, attribute, sigscore, chimeric, eval, bench };

/// Checks that everything `command` needs is present. Returns all problems.
std::vector<std::string> validate(const ExperimentConfig& config, Command command);

/// Throws ConfigError if validate() reports anything.
void require_valid(const ExperimentConfig& config, Command command);

}  // namespace fda
