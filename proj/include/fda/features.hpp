#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fda/conllu.hpp"

namespace fda {

/// Joins the elements of one n-gram or sn-gram. U+001F never occurs in
/// tokenized text.
inline constexpr char kFeatureSeparator = '\x1f';

using FeatureId = std::uint32_t;

/// Multiset of feature strings extracted from one document.
using FeatureCounts = std::unordered_map<std::string, std::uint64_t>;

enum class FeatureKind { word_ngram, ngram_union, sngram };

/// Element labelling used when rendering a syntactic n-gram.
enum class SnGramLabel { word, lemma, pos, deprel };

struct FeatureModel {
  FeatureKind kind = FeatureKind::ngram_union;
  std::vector<int> orders{1, 2};  // a single entry unless kind == ngram_union
  SnGramLabel label = SnGramLabel::word;

  /// Canonical text form, e.g. "ngram-union:1,2", "word-ngram:3",
  /// "sngram:deprel:2". parse() accepts exactly what to_string() produces.
  std::string to_string() const;
  static FeatureModel parse(std::string_view text);

  bool operator==(const FeatureModel&) const = default;
};

std::string_view to_string(SnGramLabel label);
SnGramLabel parse_sngram_label(std::string_view text);

/// Contiguous k-token windows. Throws std::invalid_argument if k < 1.
FeatureCounts extract_ngrams(std::span<const std::string> tokens, int k);
void add_ngrams(std::span<const std::string> tokens, int k, FeatureCounts& out);

/// Syntactic n-grams: one feature per downward head-to-dependent path of
/// exactly k nodes, rendered root-side first. Each path is found from its
/// lowest node by climbing k-1 heads, so the cost is O(k * tokens).
/// Throws DataError for an invalid tree, std::invalid_argument if k < 1.
FeatureCounts extract_sngrams(const DepSentence& sentence, SnGramLabel label, int k);
void add_sngrams(const DepSentence& sentence, SnGramLabel label, int k, FeatureCounts& out);

/// Applies `model` to one document. Syntactic models need `tree`.
FeatureCounts extract_features(std::string_view text, const std::optional<std::vector<DepSentence>>& tree,
                               const FeatureModel& model);

/// Top-m features of the training data, most frequent first.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(FeatureModel model, std::size_t profile_size, std::vector<std::string> features,
             std::vector<std::uint64_t> frequencies);

  std::size_t size() const { return features_.size(); }
  std::size_t profile_size() const { return profile_size_; }
  const FeatureModel& model() const { return model_; }
  const std::vector<std::string>& features() const { return features_; }
  const std::vector<std::uint64_t>& frequencies() const { return frequencies_; }
  const std::string& feature(FeatureId id) const { return features_.at(id); }
  std::optional<FeatureId> find(const std::string& feature) const;

 private:
  FeatureModel model_;
  std::size_t profile_size_ = 0;
  std::vector<std::string> features_;
  std::vector<std::uint64_t> frequencies_;
  std::unordered_map<std::string, FeatureId> index_;
};

/// Ranks features by total training frequency (descending), breaking ties by
/// byte-wise string order, and keeps the first `profile_size`.
/// Throws DataError when the training data holds no features at all.
Vocabulary build_vocabulary(std::span<const FeatureCounts> training_docs, std::size_t profile_size,
                            FeatureModel model = {});

/// Sparse in-vocabulary counts of one document, sorted by feature id.
struct FeatureVector {
  std::vector<std::pair<FeatureId, std::uint64_t>> entries;
  std::uint64_t total = 0;
};

FeatureVector vectorize(const FeatureCounts& doc, const Vocabulary& vocab);

/// Two-column TSV dump: feature string, frequency.
void write_feature_tsv(std::ostream& os, const Vocabulary& vocab);
std::vector<std::pair<std::string, std::uint64_t>> read_feature_tsv(std::istream& is);

}  // namespace fda
