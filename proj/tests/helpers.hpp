#pragma once

// Shared fixtures for the unit, integration and acceptance suites.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fda/corpus.hpp"
#include "fda/signature.hpp"
#include "fda/synthetic.hpp"

namespace fda::testing {

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("fda-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes `texts[s][d]` to root/<label s>/doc<d>.txt.
inline void write_text_corpus(const std::filesystem::path& root, const std::vector<std::string>& labels,
                              const std::vector<std::vector<std::string>>& texts) {
  for (std::size_t s = 0; s < labels.size(); ++s) {
    for (std::size_t d = 0; d < texts[s].size(); ++d) {
      char name[32];
      std::snprintf(name, sizeof name, "doc%03zu.txt", d);
      write_file(root / labels[s] / name, texts[s][d]);
    }
  }
}

/// Each subject writes only its own words, so subjects are separable.
inline std::vector<std::vector<std::string>> disjoint_texts(std::size_t subjects, std::size_t docs,
                                                            std::size_t words_per_subject = 5,
                                                            std::size_t tokens = 40) {
  std::vector<std::vector<std::string>> out(subjects);
  for (std::size_t s = 0; s < subjects; ++s) {
    for (std::size_t d = 0; d < docs; ++d) {
      std::string text;
      for (std::size_t t = 0; t < tokens; ++t) {
        const std::size_t w = (t * 7 + d * 3 + t / 3) % words_per_subject;
        if (t) text += ' ';
        text += "s" + std::to_string(s) + "w" + std::to_string(w);
      }
      out[s].push_back(text);
    }
  }
  return out;
}

inline std::vector<std::string> labels(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%02zu", prefix.c_str(), i);
    out.emplace_back(buf);
  }
  return out;
}

/// SVC-style directory: per writer `samples` genuine files followed by
/// `forgeries` skilled-forgery files.
inline void write_svc_corpus(const std::filesystem::path& root, int writers, int samples, int forgeries = 0) {
  std::filesystem::create_directories(root);
  for (int w = 0; w < writers; ++w) {
    for (int i = 1; i <= samples + forgeries; ++i) {
      std::ofstream out(root / ("U" + std::to_string(w + 1) + "S" + std::to_string(i) + ".TXT"));
      // Forgeries imitate another writer so that loading them would be visible.
      write_svc_sample(out, make_synthetic_signature(i > samples ? (w + 1) % writers : w, i));
    }
  }
}

}  // namespace fda::testing
