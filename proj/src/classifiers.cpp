#include "fda/classifiers.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "fda/error.hpp"
#include "fda/numeric.hpp"
#include "fda/text.hpp"

namespace fda {
namespace {

constexpr std::string_view kMagic = "fda-model";
constexpr int kFormatVersion = 1;

struct Counts {
  std::vector<std::uint64_t> feature_subject;  // [f * S + s]
  std::vector<std::uint64_t> subject_totals;
  std::vector<std::uint64_t> doc_counts;
};

Counts accumulate(std::span<const LabeledVector> train, std::size_t vocab_size, std::size_t subject_count) {
  if (subject_count == 0) throw DataError("classifier needs at least one subject");
  Counts c;
  c.feature_subject.assign(vocab_size * subject_count, 0);
  c.subject_totals.assign(subject_count, 0);
  c.doc_counts.assign(subject_count, 0);
  for (const auto& item : train) {
    if (item.subject < 0 || static_cast<std::size_t>(item.subject) >= subject_count) {
      throw DataError("training vector has subject id " + std::to_string(item.subject) + " outside 0.." +
                      std::to_string(subject_count - 1));
    }
    const auto s = static_cast<std::size_t>(item.subject);
    ++c.doc_counts[s];
    for (const auto& [f, n] : item.features.entries) {
      if (f >= vocab_size) throw DataError("training vector refers to feature outside the vocabulary");
      c.feature_subject[f * subject_count + s] += n;
      c.subject_totals[s] += n;
    }
  }
  return c;
}

void require_training_docs(const Counts& c, const std::vector<Subject>& subjects) {
  for (std::size_t s = 0; s < subjects.size(); ++s) {
    if (c.doc_counts[s] == 0) throw DataError("subject '" + subjects[s].label + "' has no training documents");
  }
}

void check_alpha(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be a finite value >= 0");
}

Posterior normalize(std::vector<double> loglik, bool degenerate) {
  Posterior p;
  p.probabilities = softmax(loglik);
  p.degenerate = degenerate;
  return p;
}

// --- persistence helpers ---------------------------------------------------

std::string hex(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::hex);
  return std::string(buf, ptr);
}

double parse_hex(std::string_view s) {
  bool negative = false;
  if (!s.empty() && s.front() == '-') {
    negative = true;
    s.remove_prefix(1);
  }
  double v = 0.0;
  if (s == "inf") {
    v = INFINITY;
  } else {
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v, std::chars_format::hex);
    if (ec != std::errc{} || ptr != end) throw DataError("model file: invalid real '" + std::string(s) + "'");
  }
  return negative ? -v : v;
}

class LineReader {
 public:
  explicit LineReader(std::istream& is) : is_(is) {}

  std::string next() {
    std::string line;
    if (!std::getline(is_, line)) throw DataError("model file truncated after line " + std::to_string(line_));
    ++line_;
    return line;
  }

  // Reads "<key> <value>" and returns the value.
  std::string field(std::string_view key) {
    const std::string line = next();
    if (line.size() < key.size() + 1 || line.compare(0, key.size(), key) != 0 || line[key.size()] != ' ') {
      throw DataError("model file line " + std::to_string(line_) + ": expected '" + std::string(key) + "'");
    }
    return line.substr(key.size() + 1);
  }

  std::size_t count(std::string_view key) {
    const std::string v = field(key);
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
      throw DataError("model file line " + std::to_string(line_) + ": invalid count");
    }
    return n;
  }

  std::size_t line() const { return line_; }

 private:
  std::istream& is_;
  std::size_t line_ = 0;
};

template <typename Model>
void write_common(std::ostream& os, std::string_view kind, const Model& m) {
  os << kMagic << ' ' << kFormatVersion << '\n';
  os << "classifier " << kind << '\n';
  os << "feature-model " << m.vocab.model().to_string() << '\n';
  os << "profile-size " << m.vocab.profile_size() << '\n';
  os << "alpha " << hex(m.alpha) << '\n';
  os << "subjects " << m.subjects.size() << '\n';
  for (const auto& s : m.subjects) os << s.label << '\n';
  os << "vocabulary " << m.vocab.size() << '\n';
  write_feature_tsv(os, m.vocab);
}

void write_table(std::ostream& os, std::string_view key, const std::vector<std::uint64_t>& counts,
                 const std::vector<double>& table, std::size_t subject_count) {
  os << key;
  for (auto c : counts) os << ' ' << c;
  os << '\n';
  os << "params\n";
  for (std::size_t i = 0; i < table.size(); ++i) {
    os << hex(table[i]) << ((i + 1) % subject_count == 0 ? '\n' : ' ');
  }
  os << "end\n";
}

}  // namespace

SubjectId argmax_subject(std::span<const double> scores) {
  if (scores.empty()) throw std::invalid_argument("argmax of an empty score vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return static_cast<SubjectId>(best);
}

MnbModel mnb_train(std::span<const LabeledVector> train, Vocabulary vocab, double alpha,
                   std::vector<Subject> subjects) {
  check_alpha(alpha);
  const std::size_t S = subjects.size();
  const std::size_t n = vocab.size();
  const Counts c = accumulate(train, n, S);
  require_training_docs(c, subjects);

  MnbModel m;
  m.alpha = alpha;
  const double a = m.effective_alpha();
  m.log_params.resize(n * S);
  for (std::size_t s = 0; s < S; ++s) {
    const double log_denominator = std::log(static_cast<double>(c.subject_totals[s]) + a * static_cast<double>(n));
    for (std::size_t f = 0; f < n; ++f) {
      m.log_params[f * S + s] = std::log(static_cast<double>(c.feature_subject[f * S + s]) + a) - log_denominator;
    }
  }
  m.subject_totals = c.subject_totals;
  m.vocab = std::move(vocab);
  m.subjects = std::move(subjects);
  return m;
}

std::vector<double> mnb_log_likelihoods(const MnbModel& model, const FeatureVector& doc) {
  const std::size_t S = model.subject_count();
  std::vector<double> ll(S, 0.0);
  for (const auto& [f, count] : doc.entries) {
    const double* row = model.log_params.data() + static_cast<std::size_t>(f) * S;
    const double weight = static_cast<double>(count);
    for (std::size_t s = 0; s < S; ++s) ll[s] += weight * row[s];
  }
  return ll;
}

Posterior mnb_posterior(const MnbModel& model, const FeatureVector& doc) {
  return normalize(mnb_log_likelihoods(model, doc), doc.total == 0);
}

SubjectId mnb_attribute(const MnbModel& model, const FeatureVector& doc) {
  return argmax_subject(mnb_posterior(model, doc).probabilities);
}

PnbModel pnb_train(std::span<const LabeledVector> train, Vocabulary vocab, double alpha,
                   std::vector<Subject> subjects) {
  check_alpha(alpha);
  const std::size_t S = subjects.size();
  const std::size_t n = vocab.size();
  const Counts c = accumulate(train, n, S);
  require_training_docs(c, subjects);

  PnbModel m;
  m.alpha = alpha;
  const double a = m.effective_alpha();
  m.doc_counts = c.doc_counts;
  m.rates.resize(n * S);
  m.log_rates.resize(n * S);
  m.rate_sums.assign(S, 0.0);
  for (std::size_t f = 0; f < n; ++f) {
    for (std::size_t s = 0; s < S; ++s) {
      const double lambda =
          (static_cast<double>(c.feature_subject[f * S + s]) + a) / static_cast<double>(c.doc_counts[s]);
      m.rates[f * S + s] = lambda;
      m.log_rates[f * S + s] = std::log(lambda);
      m.rate_sums[s] += lambda;
    }
  }
  m.vocab = std::move(vocab);
  m.subjects = std::move(subjects);
  return m;
}

std::vector<double> pnb_log_likelihoods(const PnbModel& model, const FeatureVector& doc) {
  const std::size_t S = model.subject_count();
  std::vector<double> ll(S);
  for (std::size_t s = 0; s < S; ++s) ll[s] = -model.rate_sums[s];
  for (const auto& [f, count] : doc.entries) {
    const double* row = model.log_rates.data() + static_cast<std::size_t>(f) * S;
    const double weight = static_cast<double>(count);
    for (std::size_t s = 0; s < S; ++s) ll[s] += weight * row[s];
  }
  return ll;
}

Posterior pnb_posterior(const PnbModel& model, const FeatureVector& doc) {
  return normalize(pnb_log_likelihoods(model, doc), doc.total == 0);
}

const Vocabulary& vocabulary(const Classifier& c) {
  return std::visit([](const auto& m) -> const Vocabulary& { return m.vocab; }, c);
}

const std::vector<Subject>& subjects(const Classifier& c) {
  return std::visit([](const auto& m) -> const std::vector<Subject>& { return m.subjects; }, c);
}

Posterior posterior(const Classifier& c, const FeatureVector& doc) {
  if (const auto* mnb = std::get_if<MnbModel>(&c)) return mnb_posterior(*mnb, doc);
  return pnb_posterior(std::get<PnbModel>(c), doc);
}

void save_model(std::ostream& os, const Classifier& c) {
  if (const auto* m = std::get_if<MnbModel>(&c)) {
    write_common(os, "mnb", *m);
    write_table(os, "subject-totals", m->subject_totals, m->log_params, m->subject_count());
  } else {
    const auto& p = std::get<PnbModel>(c);
    write_common(os, "pnb", p);
    write_table(os, "doc-counts", p.doc_counts, p.rates, p.subject_count());
  }
}

Classifier load_model(std::istream& is) {
  LineReader in(is);
  const std::string version = in.field(kMagic);
  if (version != std::to_string(kFormatVersion)) {
    throw DataError("unsupported model format version '" + version + "'");
  }
  const std::string kind = in.field("classifier");
  if (kind != "mnb" && kind != "pnb") throw DataError("unknown classifier '" + kind + "' in model file");
  FeatureModel feature_model;
  try {
    feature_model = FeatureModel::parse(in.field("feature-model"));
  } catch (const ConfigError& e) {
    throw DataError(std::string("model file: ") + e.what());
  }
  const std::size_t profile = in.count("profile-size");
  const double alpha = parse_hex(in.field("alpha"));

  std::vector<Subject> subjects(in.count("subjects"));
  for (std::size_t s = 0; s < subjects.size(); ++s) subjects[s] = Subject{static_cast<SubjectId>(s), in.next()};
  if (subjects.empty()) throw DataError("model file has no subjects");
  const std::size_t S = subjects.size();

  const std::size_t m = in.count("vocabulary");
  std::vector<std::string> features;
  std::vector<std::uint64_t> freqs;
  for (std::size_t i = 0; i < m; ++i) {
    const std::string line = in.next();
    const auto tab = line.rfind('\t');
    std::uint64_t fq = 0;
    if (tab == std::string::npos ||
        std::from_chars(line.data() + tab + 1, line.data() + line.size(), fq).ec != std::errc{}) {
      throw DataError("model file line " + std::to_string(in.line()) + ": bad vocabulary entry");
    }
    features.push_back(line.substr(0, tab));
    freqs.push_back(fq);
  }
  Vocabulary vocab(feature_model, profile, std::move(features), std::move(freqs));

  const std::string counts_line = in.field(kind == "mnb" ? "subject-totals" : "doc-counts");
  std::vector<std::uint64_t> counts;
  for (auto tok : split(counts_line, ' ')) {
    std::uint64_t v = 0;
    if (std::from_chars(tok.data(), tok.data() + tok.size(), v).ec != std::errc{}) {
      throw DataError("model file line " + std::to_string(in.line()) + ": bad count");
    }
    counts.push_back(v);
  }
  if (counts.size() != S) throw DataError("model file: per-subject count list has wrong length");
  if (in.next() != "params") throw DataError("model file line " + std::to_string(in.line()) + ": expected params");
  std::vector<double> table;
  table.reserve(m * S);
  for (std::size_t f = 0; f < m; ++f) {
    const auto row = in.next();
    const auto cells = split(row, ' ');
    if (cells.size() != S) throw DataError("model file line " + std::to_string(in.line()) + ": wrong column count");
    for (auto cell : cells) table.push_back(parse_hex(cell));
  }
  if (in.next() != "end") throw DataError("model file: missing end marker");

  if (kind == "mnb") {
    MnbModel model;
    model.vocab = std::move(vocab);
    model.subjects = std::move(subjects);
    model.alpha = alpha;
    model.subject_totals = std::move(counts);
    model.log_params = std::move(table);
    return model;
  }
  PnbModel model;
  model.vocab = std::move(vocab);
  model.subjects = std::move(subjects);
  model.alpha = alpha;
  model.doc_counts = std::move(counts);
  model.rates = std::move(table);
  model.log_rates.resize(model.rates.size());
  model.rate_sums.assign(S, 0.0);
  for (std::size_t f = 0; f < m; ++f) {
    for (std::size_t s = 0; s < S; ++s) {
      model.log_rates[f * S + s] = std::log(model.rates[f * S + s]);
      model.rate_sums[s] += model.rates[f * S + s];
    }
  }
  return model;
}

}  // namespace fda
