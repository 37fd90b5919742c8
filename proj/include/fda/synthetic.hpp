#pragma once

#include <cstddef>

#include "fda/corpus.hpp"
#include "fda/signature.hpp"

namespace fda {

struct SyntheticCorpusSpec {
  std::size_t subjects = 10;
  std::size_t docs_per_subject = 10;
  std::size_t tokens_per_doc = 200;
  std::size_t vocabulary = 5000;
};

/// Deterministic text corpus with no randomness: token ranks follow a
/// log-uniform (Zipf-like) Weyl sequence and each subject shifts the rank to
/// word mapping, so subjects differ in style but share a vocabulary.
Corpus make_synthetic_corpus(const SyntheticCorpusSpec& spec);

/// Deterministic online signature for (writer, index): a writer-specific
/// closed curve with a small per-sample wobble and one pen lift.
SignatureSample make_synthetic_signature(SubjectId writer, int index, std::size_t points = 120);

}  // namespace fda
