#include "fda/features.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "fda/error.hpp"
#include "fda/text.hpp"

namespace fda {
namespace {

int parse_order(std::string_view s) {
  int k = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, k);
  if (ec != std::errc{} || ptr != end || k < 1) {
    throw ConfigError("invalid n-gram order '" + std::string(s) + "'");
  }
  return k;
}

void require_order(int k) {
  if (k < 1) throw std::invalid_argument("n-gram order must be >= 1, got " + std::to_string(k));
}

const std::string& element(const DepToken& tok, SnGramLabel label) {
  switch (label) {
    case SnGramLabel::word: return tok.form;
    case SnGramLabel::lemma: return tok.lemma;
    case SnGramLabel::pos: return tok.upos;
    case SnGramLabel::deprel: return tok.deprel;
  }
  return tok.form;
}

}  // namespace

std::string_view to_string(SnGramLabel label) {
  switch (label) {
    case SnGramLabel::word: return "word";
    case SnGramLabel::lemma: return "lemma";
    case SnGramLabel::pos: return "pos";
    case SnGramLabel::deprel: return "deprel";
  }
  return "word";
}

SnGramLabel parse_sngram_label(std::string_view text) {
  if (text == "word") return SnGramLabel::word;
  if (text == "lemma") return SnGramLabel::lemma;
  if (text == "pos") return SnGramLabel::pos;
  if (text == "deprel") return SnGramLabel::deprel;
  throw ConfigError("unknown sn-gram label '" + std::string(text) + "' (word|lemma|pos|deprel)");
}

std::string FeatureModel::to_string() const {
  std::string out;
  switch (kind) {
    case FeatureKind::word_ngram: out = "word-ngram:"; break;
    case FeatureKind::ngram_union: out = "ngram-union:"; break;
    case FeatureKind::sngram:
      out = "sngram:";
      out += fda::to_string(label);
      out += ':';
      break;
  }
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(orders[i]);
  }
  return out;
}

FeatureModel FeatureModel::parse(std::string_view text) {
  FeatureModel m;
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw ConfigError("invalid feature model '" + std::string(text) + "'");
  const auto head = text.substr(0, colon);
  auto rest = text.substr(colon + 1);
  if (head == "word-ngram") {
    m.kind = FeatureKind::word_ngram;
  } else if (head == "ngram-union") {
    m.kind = FeatureKind::ngram_union;
  } else if (head == "sngram") {
    m.kind = FeatureKind::sngram;
    const auto c2 = rest.find(':');
    if (c2 == std::string_view::npos) throw ConfigError("sngram model needs a label: '" + std::string(text) + "'");
    m.label = parse_sngram_label(rest.substr(0, c2));
    rest = rest.substr(c2 + 1);
  } else {
    throw ConfigError("unknown feature model '" + std::string(head) + "'");
  }
  m.orders.clear();
  std::size_t start = 0;
  while (start <= rest.size()) {
    auto comma = rest.find(',', start);
    if (comma == std::string_view::npos) comma = rest.size();
    m.orders.push_back(parse_order(rest.substr(start, comma - start)));
    start = comma + 1;
  }
  if (m.kind != FeatureKind::ngram_union && m.orders.size() != 1) {
    throw ConfigError("feature model '" + std::string(text) + "' takes exactly one order");
  }
  return m;
}

void add_ngrams(std::span<const std::string> tokens, int k, FeatureCounts& out) {
  require_order(k);
  const std::size_t n = static_cast<std::size_t>(k);
  if (tokens.size() < n) return;
  std::string key;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    key.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j) key += kFeatureSeparator;
      key += tokens[i + j];
    }
    ++out[key];
  }
}

FeatureCounts extract_ngrams(std::span<const std::string> tokens, int k) {
  FeatureCounts out;
  add_ngrams(tokens, k, out);
  return out;
}

void add_sngrams(const DepSentence& sentence, SnGramLabel label, int k, FeatureCounts& out) {
  require_order(k);
  validate_tree(sentence);
  const auto& toks = sentence.tokens;
  const int n = static_cast<int>(toks.size());

  // Depth of every node via an explicit-stack walk from the root over a
  // compressed child list.
  std::vector<int> child_start(n + 1, 0);
  for (const auto& t : toks) {
    if (t.head >= 0) ++child_start[t.head + 1];
  }
  std::partial_sum(child_start.begin(), child_start.end(), child_start.begin());
  std::vector<int> children(std::max(n - 1, 0));
  std::vector<int> fill(child_start.begin(), child_start.end() - 1);
  for (int i = 0; i < n; ++i) {
    if (toks[i].head >= 0) children[fill[toks[i].head]++] = i;
  }
  std::vector<int> depth(n, 0);
  std::vector<int> stack{sentence.root};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int c = child_start[v]; c < child_start[v + 1]; ++c) {
      depth[children[c]] = depth[v] + 1;
      stack.push_back(children[c]);
    }
  }

  std::vector<int> path(k);
  std::string key;
  for (int v = 0; v < n; ++v) {
    if (depth[v] < k - 1) continue;
    int u = v;
    for (int j = k - 1; j >= 0; --j) {
      path[j] = u;
      u = toks[u].head;
    }
    key.clear();
    for (int j = 0; j < k; ++j) {
      if (j) key += kFeatureSeparator;
      key += element(toks[path[j]], label);
    }
    ++out[key];
  }
}

FeatureCounts extract_sngrams(const DepSentence& sentence, SnGramLabel label, int k) {
  FeatureCounts out;
  add_sngrams(sentence, label, k, out);
  return out;
}

FeatureCounts extract_features(std::string_view text, const std::optional<std::vector<DepSentence>>& tree,
                               const FeatureModel& model) {
  FeatureCounts out;
  if (model.kind == FeatureKind::sngram) {
    if (!tree) throw DataError("syntactic n-gram model requires a dependency tree (.conllu sidecar)");
    for (const auto& sentence : *tree) {
      if (model.label == SnGramLabel::word || model.label == SnGramLabel::lemma) {
        // Lowercase word-like labels so they agree with the tokenizer.
        DepSentence lowered = sentence;
        for (auto& t : lowered.tokens) {
          t.form = to_lower_utf8(t.form);
          t.lemma = to_lower_utf8(t.lemma);
        }
        add_sngrams(lowered, model.label, model.orders.front(), out);
      } else {
        add_sngrams(sentence, model.label, model.orders.front(), out);
      }
    }
    return out;
  }
  const auto tokens = tokenize(text);
  for (int k : model.orders) add_ngrams(tokens, k, out);
  return out;
}

Vocabulary::Vocabulary(FeatureModel model, std::size_t profile_size, std::vector<std::string> features,
                       std::vector<std::uint64_t> frequencies)
    : model_(std::move(model)),
      profile_size_(profile_size),
      features_(std::move(features)),
      frequencies_(std::move(frequencies)) {
  if (frequencies_.size() != features_.size()) {
    throw DataError("vocabulary frequency list does not match feature list");
  }
  if (features_.size() > profile_size_) throw DataError("vocabulary larger than its profile size");
  index_.reserve(features_.size());
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (!index_.emplace(features_[i], static_cast<FeatureId>(i)).second) {
      throw DataError("duplicate vocabulary feature");
    }
  }
}

std::optional<FeatureId> Vocabulary::find(const std::string& feature) const {
  const auto it = index_.find(feature);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary build_vocabulary(std::span<const FeatureCounts> training_docs, std::size_t profile_size,
                            FeatureModel model) {
  if (profile_size < 1) throw std::invalid_argument("profile size must be >= 1");
  std::unordered_map<std::string_view, std::uint64_t> totals;
  for (const auto& doc : training_docs) {
    for (const auto& [feature, count] : doc) totals[feature] += count;
  }
  if (totals.empty()) throw DataError("cannot build a vocabulary from empty training data");

  std::vector<std::pair<std::string_view, std::uint64_t>> ranked(totals.begin(), totals.end());
  auto by_rank = [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  };
  const std::size_t keep = std::min(profile_size, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(), by_rank);

  std::vector<std::string> features;
  std::vector<std::uint64_t> freqs;
  features.reserve(keep);
  freqs.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    features.emplace_back(ranked[i].first);
    freqs.push_back(ranked[i].second);
  }
  return Vocabulary(std::move(model), profile_size, std::move(features), std::move(freqs));
}

FeatureVector vectorize(const FeatureCounts& doc, const Vocabulary& vocab) {
  FeatureVector v;
  for (const auto& [feature, count] : doc) {
    if (count == 0) continue;
    if (auto id = vocab.find(feature)) {
      v.entries.emplace_back(*id, count);
      v.total += count;
    }
  }
  std::sort(v.entries.begin(), v.entries.end());
  return v;
}

void write_feature_tsv(std::ostream& os, const Vocabulary& vocab) {
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    os << vocab.features()[i] << '\t' << vocab.frequencies()[i] << '\n';
  }
}

std::vector<std::pair<std::string, std::uint64_t>> read_feature_tsv(std::istream& is) {
  std::vector<std::pair<std::string, std::uint64_t>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.rfind('\t');
    std::uint64_t freq = 0;
    const char* begin = line.data() + (tab == std::string::npos ? 0 : tab + 1);
    const char* end = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(begin, end, freq);
    if (tab == std::string::npos || ec != std::errc{} || ptr != end) {
      throw DataError("feature TSV line " + std::to_string(line_no) + ": expected '<feature>\\t<count>'");
    }
    rows.emplace_back(line.substr(0, tab), freq);
  }
  return rows;
}

}  // namespace fda
