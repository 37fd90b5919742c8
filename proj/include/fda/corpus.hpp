#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fda/conllu.hpp"
#include "fda/signature.hpp"
#include "fda/subject.hpp"

namespace fda {

struct Document {
  std::string doc_id;  // "<subject label>/<file stem>"
  SubjectId subject = 0;
  std::string text;
  std::optional<std::vector<DepSentence>> tree;
  std::size_t byte_length() const { return text.size(); }
};

/// Documents are grouped by subject (ascending id) and, within a subject,
/// ordered by file name.
struct Corpus {
  std::vector<Subject> subjects;
  std::vector<Document> documents;

  std::vector<std::size_t> documents_of(SubjectId subject) const;
};

/// One directory per subject, one UTF-8 `.txt` file per document, with an
/// optional `<stem>.conllu` sidecar holding its dependency parse. Subjects
/// are sorted by directory name and numbered densely.
Corpus load_text_corpus(const std::filesystem::path& root, unsigned threads = 1);

/// Drops subjects with fewer than `per_subject` documents and keeps the
/// `per_subject` largest (by byte length, ties by file name) of the rest,
/// preserving file-name order. Subject ids are reassigned densely.
Corpus keep_largest(const Corpus& corpus, std::size_t per_subject);

/// Global document indices used for training and testing in one fold.
struct Fold {
  std::size_t index = 0;
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

struct SplitPlan {
  std::size_t train_window = 0;
  std::size_t test_window = 0;
  std::vector<std::vector<std::size_t>> subject_docs;  // ordered per subject
  std::vector<Fold> folds;

  std::size_t fold_count() const { return folds.size(); }
};

/// Circular train/test window over each subject's ordered documents. Fold k
/// trains on positions k..k+train_w-1 and tests on the next test_w
/// positions, all modulo train_w + test_w. Every subject must have exactly
/// train_w + test_w documents.
SplitPlan rolling_folds(const Corpus& corpus, std::size_t train_w, std::size_t test_w);

/// A document paired with a signature of the same chimeric subject.
struct ChimericItem {
  std::string item_id;
  SubjectId subject = 0;
  Document document;
  SignatureSample signature;
};

struct ChimericDataset {
  std::vector<Subject> subjects;  // label "<author>+<writer>"
  std::vector<ChimericItem> train;
  std::vector<ChimericItem> test;
};

/// Pairs author i with writer i for i < min(authors, writers). The first
/// train_n documents and signatures of each subject form the training set,
/// the next test_n the test set; anything beyond is dropped.
ChimericDataset build_chimeric(const Corpus& text, const SignatureCorpus& signatures, std::size_t train_n,
                               std::size_t test_n);

/// As above, for text corpora that ship separate train and test folders
/// (same subject labels in both): training documents come from the front of
/// `train_text`, test documents from the front of `test_text`.
ChimericDataset build_chimeric(const Corpus& train_text, const Corpus& test_text,
                               const SignatureCorpus& signatures, std::size_t train_n, std::size_t test_n);

}  // namespace fda
