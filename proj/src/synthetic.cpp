#include "fda/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

namespace fda {

Corpus make_synthetic_corpus(const SyntheticCorpusSpec& spec) {
  Corpus corpus;
  const double log_v = std::log(static_cast<double>(spec.vocabulary));
  std::uint64_t position = 0;
  for (std::size_t s = 0; s < spec.subjects; ++s) {
    const SubjectId id = static_cast<SubjectId>(s);
    char label[32];
    std::snprintf(label, sizeof label, "subject%03zu", s);
    corpus.subjects.push_back(Subject{id, label});
    for (std::size_t d = 0; d < spec.docs_per_subject; ++d) {
      Document doc;
      char name[32];
      std::snprintf(name, sizeof name, "doc%05zu", d);
      doc.doc_id = std::string(label) + "/" + name;
      doc.subject = id;
      doc.text.reserve(spec.tokens_per_doc * 6);
      for (std::size_t t = 0; t < spec.tokens_per_doc; ++t) {
        const double u = std::fmod(static_cast<double>(++position) * std::numbers::phi, 1.0);
        const auto rank = static_cast<std::size_t>(std::exp(u * log_v)) - 1;
        const std::size_t word = (rank + s * 37) % spec.vocabulary;
        if (t) doc.text += ' ';
        doc.text += 'w';
        doc.text += std::to_string(word);
      }
      corpus.documents.push_back(std::move(doc));
    }
  }
  return corpus;
}

SignatureSample make_synthetic_signature(SubjectId writer, int index, std::size_t points) {
  SignatureSample s;
  s.writer = writer;
  s.index = index;
  s.source = "synthetic-U" + std::to_string(writer + 1) + "S" + std::to_string(index);
  const double a = 1.0 + static_cast<double>(writer % 5);
  const double b = 2.0 + static_cast<double>((writer / 5) % 4);
  const double phase = 0.3 * static_cast<double>(writer);
  const double wobble = 0.02 * static_cast<double>(index % 7);
  for (std::size_t i = 0; i < points; ++i) {
    const double u = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(points);
    PenPoint p;
    p.x = static_cast<int>(std::lround(3000.0 + 1500.0 * std::sin(a * u + phase + wobble)));
    p.y = static_cast<int>(std::lround(2000.0 + 900.0 * std::sin(b * u + wobble)));
    p.t = static_cast<std::int64_t>(i) * 10;
    p.pen = (i == points / 2) ? 0 : 1;
    p.attitude = PenAttitude{900, 600, 400 + static_cast<int>(i % 50)};
    s.points.push_back(p);
  }
  return s;
}

}  // namespace fda
