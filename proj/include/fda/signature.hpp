#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fda/subject.hpp"

namespace fda {

struct PenAttitude {
  int azimuth = 0;
  int altitude = 0;
  int pressure = 0;
};

struct PenPoint {
  int x = 0;
  int y = 0;
  std::int64_t t = 0;  // milliseconds
  int pen = 1;         // 1 = pen down
  std::optional<PenAttitude> attitude;
};

/// One online signature: at least two points, nondecreasing timestamps.
struct SignatureSample {
  SubjectId writer = 0;
  int index = 0;  // 1-based sample number within the writer
  std::string source;
  std::vector<PenPoint> points;
};

/// Genuine samples grouped by writer, each group ordered by sample number.
struct SignatureCorpus {
  std::vector<Subject> writers;
  std::vector<std::vector<SignatureSample>> samples;

  std::size_t sample_count() const;
};

/// Parses one sample file: a point count P, then P lines of 4 (x y t pen)
/// or 7 (x y t pen azimuth altitude pressure) integers.
SignatureSample parse_svc_sample(std::string_view text, std::string_view source);

/// Loads `U<writer>S<sample>.TXT` files from `root`. Samples numbered above
/// `genuine_per_writer` are skilled forgeries and are skipped. Writers are
/// ordered numerically and receive dense ids.
SignatureCorpus load_svc(const std::filesystem::path& root, int genuine_per_writer = 20);

/// Writes a sample in the 4- or 7-column format read by parse_svc_sample.
void write_svc_sample(std::ostream& os, const SignatureSample& sample);

/// Fuzzy histogram of pen-down stroke directions. Bin b is centred at
/// b * delta_alpha degrees; the last bin spans the remainder up to 360.
class DirectionHistogram {
 public:
  static DirectionHistogram from_sample(const SignatureSample& sample, double delta_alpha_deg);

  std::span<const double> bins() const { return bins_; }
  double delta_alpha() const { return delta_alpha_; }
  std::size_t segments() const { return segments_; }
  bool empty() const { return segments_ == 0; }

  /// Adds one direction with triangular membership split between the two
  /// nearest bin centres. Mass is renormalized by finish().
  void add_angle(double degrees);
  void finish();

  explicit DirectionHistogram(double delta_alpha_deg);

 private:
  double delta_alpha_;
  std::vector<double> bins_;
  std::size_t segments_ = 0;
};

struct SignatureScore {
  double value = 0.0;
  bool degenerate = false;  // probe had no pen-down motion
};

/// Histogram intersection against each template, maximised over templates.
SignatureScore baseline_score(std::span<const DirectionHistogram> templates, const DirectionHistogram& probe);
SignatureScore baseline_score(std::span<const SignatureSample> templates, const SignatureSample& probe,
                              double delta_alpha_deg);

/// Rows are test items, columns subjects; every entry in [0, 1].
class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  ScoreMatrix(std::vector<std::string> subjects, std::vector<std::string> items, std::vector<double> values);

  std::size_t rows() const { return items_.size(); }
  std::size_t cols() const { return subjects_.size(); }
  double at(std::size_t row, std::size_t col) const { return values_[row * subjects_.size() + col]; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(values_).subspan(r * subjects_.size(), subjects_.size());
  }
  const std::vector<std::string>& subjects() const { return subjects_; }
  const std::vector<std::string>& items() const { return items_; }
  const std::vector<double>& values() const { return values_; }

  bool operator==(const ScoreMatrix&) const = default;

 private:
  std::vector<std::string> subjects_;
  std::vector<std::string> items_;
  std::vector<double> values_;
};

/// CSV: header `item_id,<subject labels...>`, then `<item>,<S scores>` rows.
ScoreMatrix read_score_matrix(std::istream& is, std::string_view source = "<csv>");
ScoreMatrix load_score_matrix(const std::filesystem::path& path);
void write_score_matrix(std::ostream& os, const ScoreMatrix& matrix);

}  // namespace fda
