#include "fda/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "fda/error.hpp"
#include "fda/parallel.hpp"
#include "fda/text.hpp"

namespace fda {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<fs::path> sorted_entries(const fs::path& dir, bool directories) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (directories ? e.is_directory() : (e.is_regular_file() && e.path().extension() == ".txt")) {
      out.push_back(e.path());
    }
  }
  std::sort(out.begin(), out.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
  return out;
}

ChimericItem make_item(const Subject& subject, std::size_t position, const Document& doc,
                       const SignatureSample& sig) {
  ChimericItem item;
  item.item_id = subject.label + "#" + std::to_string(position + 1);
  item.subject = subject.id;
  item.document = doc;
  item.document.subject = subject.id;
  item.signature = sig;
  item.signature.writer = subject.id;
  return item;
}

}  // namespace

std::vector<std::size_t> Corpus::documents_of(SubjectId subject) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < documents.size(); ++i) {
    if (documents[i].subject == subject) out.push_back(i);
  }
  return out;
}

Corpus load_text_corpus(const fs::path& root, unsigned threads) {
  if (!fs::is_directory(root)) throw DataError("corpus directory not found: " + root.string());
  Corpus corpus;
  std::vector<fs::path> files;
  for (const auto& dir : sorted_entries(root, true)) {
    const auto label = dir.filename().string();
    const auto docs = sorted_entries(dir, false);
    if (docs.empty()) throw DataError("empty subject directory: " + label);
    const SubjectId id = static_cast<SubjectId>(corpus.subjects.size());
    corpus.subjects.push_back(Subject{id, label});
    for (const auto& f : docs) {
      Document d;
      d.doc_id = label + "/" + f.stem().string();
      d.subject = id;
      corpus.documents.push_back(std::move(d));
      files.push_back(f);
    }
  }
  if (corpus.subjects.empty()) throw DataError("corpus directory has no subject folders: " + root.string());

  parallel_for(files.size(), threads, [&](std::size_t i) {
    Document& d = corpus.documents[i];
    d.text = slurp(files[i]);
    if (!is_valid_utf8(d.text)) throw DataError("file is not valid UTF-8: " + files[i].string());
    if (d.text.empty()) throw DataError("empty document: " + files[i].string());
    auto sidecar = files[i];
    sidecar.replace_extension(".conllu");
    if (fs::exists(sidecar)) d.tree = parse_conllu(slurp(sidecar), sidecar.string());
  });
  return corpus;
}

Corpus keep_largest(const Corpus& corpus, std::size_t per_subject) {
  Corpus out;
  for (const auto& subject : corpus.subjects) {
    auto docs = corpus.documents_of(subject.id);
    if (docs.size() < per_subject) continue;
    // Documents are already in file-name order, so a stable sort by size
    // breaks ties by name.
    std::stable_sort(docs.begin(), docs.end(), [&](std::size_t a, std::size_t b) {
      return corpus.documents[a].byte_length() > corpus.documents[b].byte_length();
    });
    docs.resize(per_subject);
    std::sort(docs.begin(), docs.end());
    const SubjectId id = static_cast<SubjectId>(out.subjects.size());
    out.subjects.push_back(Subject{id, subject.label});
    for (std::size_t i : docs) {
      Document d = corpus.documents[i];
      d.subject = id;
      out.documents.push_back(std::move(d));
    }
  }
  return out;
}

SplitPlan rolling_folds(const Corpus& corpus, std::size_t train_w, std::size_t test_w) {
  if (train_w < 1 || test_w < 1) throw ConfigError("train and test windows must both be >= 1");
  const std::size_t window = train_w + test_w;
  SplitPlan plan;
  plan.train_window = train_w;
  plan.test_window = test_w;
  std::string offenders;
  for (const auto& subject : corpus.subjects) {
    auto docs = corpus.documents_of(subject.id);
    if (docs.size() != window) {
      offenders += (offenders.empty() ? "" : ", ") + subject.label + " (" + std::to_string(docs.size()) + ")";
    }
    plan.subject_docs.push_back(std::move(docs));
  }
  if (!offenders.empty()) {
    throw DataError("rolling folds need exactly " + std::to_string(window) +
                    " documents per subject; offenders: " + offenders);
  }
  for (std::size_t k = 0; k < window; ++k) {
    Fold fold;
    fold.index = k;
    for (const auto& docs : plan.subject_docs) {
      for (std::size_t i = 0; i < train_w; ++i) fold.train.push_back(docs[(k + i) % window]);
      for (std::size_t i = 0; i < test_w; ++i) fold.test.push_back(docs[(k + train_w + i) % window]);
    }
    plan.folds.push_back(std::move(fold));
  }
  return plan;
}

ChimericDataset build_chimeric(const Corpus& train_text, const Corpus& test_text,
                               const SignatureCorpus& signatures, std::size_t train_n, std::size_t test_n) {
  const bool shared = &train_text == &test_text;
  if (!shared) {
    if (train_text.subjects.size() != test_text.subjects.size()) {
      throw DataError("train and test text corpora have different subject counts");
    }
    for (std::size_t i = 0; i < train_text.subjects.size(); ++i) {
      if (train_text.subjects[i].label != test_text.subjects[i].label) {
        throw DataError("train and test text corpora disagree on subject " + std::to_string(i) + " ('" +
                        train_text.subjects[i].label + "' vs '" + test_text.subjects[i].label + "')");
      }
    }
  }
  const std::size_t count = std::min(train_text.subjects.size(), signatures.writers.size());
  if (count == 0) throw DataError("chimeric dataset needs at least one author and one writer");

  ChimericDataset data;
  for (std::size_t s = 0; s < count; ++s) {
    const auto& author = train_text.subjects[s];
    const auto& writer = signatures.writers[s];
    const Subject subject{static_cast<SubjectId>(s), author.label + "+" + writer.label};

    const auto train_docs = train_text.documents_of(author.id);
    const auto test_docs = test_text.documents_of(author.id);
    const std::size_t test_offset = shared ? train_n : 0;
    const std::size_t needed_train = shared ? train_n + test_n : train_n;
    if (train_docs.size() < needed_train || test_docs.size() < test_offset + test_n) {
      throw DataError("author '" + author.label + "' has too few documents for a " + std::to_string(train_n) +
                      "+" + std::to_string(test_n) + " chimeric split");
    }
    const auto& sigs = signatures.samples[s];
    if (sigs.size() < train_n + test_n) {
      throw DataError("writer '" + writer.label + "' has " + std::to_string(sigs.size()) + " signatures, needs " +
                      std::to_string(train_n + test_n));
    }

    data.subjects.push_back(subject);
    for (std::size_t i = 0; i < train_n; ++i) {
      data.train.push_back(make_item(subject, i, train_text.documents[train_docs[i]], sigs[i]));
    }
    for (std::size_t i = 0; i < test_n; ++i) {
      data.test.push_back(
          make_item(subject, train_n + i, test_text.documents[test_docs[test_offset + i]], sigs[train_n + i]));
    }
  }
  return data;
}

ChimericDataset build_chimeric(const Corpus& text, const SignatureCorpus& signatures, std::size_t train_n,
                               std::size_t test_n) {
  return build_chimeric(text, text, signatures, train_n, test_n);
}

}  // namespace fda
