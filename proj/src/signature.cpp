#include "fda/signature.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <regex>
#include <sstream>
#include <unordered_set>

#include "fda/error.hpp"
#include "fda/text.hpp"

namespace fda {
namespace {

std::string at_line(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line) + ": ";
}

template <typename Int>
bool parse_int(std::string_view s, Int& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return !s.empty() && ec == std::errc{} && ptr == end;
}

std::vector<std::string_view> fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::size_t SignatureCorpus::sample_count() const {
  std::size_t n = 0;
  for (const auto& w : samples) n += w.size();
  return n;
}

SignatureSample parse_svc_sample(std::string_view text, std::string_view source) {
  SignatureSample sample;
  sample.source = std::string(source);

  std::vector<std::string_view> lines = split(text, '\n');
  std::size_t line_no = 0;
  std::size_t i = 0;
  auto next_nonempty = [&]() -> std::optional<std::string_view> {
    while (i < lines.size()) {
      auto line = trim(lines[i++]);
      line_no = i;
      if (!line.empty()) return line;
    }
    return std::nullopt;
  };

  const auto header = next_nonempty();
  std::size_t declared = 0;
  if (!header || !parse_int(*header, declared)) {
    throw DataError(at_line(source, line_no) + "expected point count on the first line");
  }
  sample.points.reserve(declared);
  while (auto line = next_nonempty()) {
    if (sample.points.size() == declared) {
      throw DataError(at_line(source, line_no) + "point count mismatch: header says " + std::to_string(declared) +
                      ", found more lines");
    }
    const auto cols = fields(*line);
    if (cols.size() != 4 && cols.size() != 7) {
      throw DataError(at_line(source, line_no) + "expected 4 or 7 integers, found " + std::to_string(cols.size()));
    }
    PenPoint p;
    bool ok = parse_int(cols[0], p.x) && parse_int(cols[1], p.y) && parse_int(cols[2], p.t) &&
              parse_int(cols[3], p.pen);
    if (ok && cols.size() == 7) {
      PenAttitude a;
      ok = parse_int(cols[4], a.azimuth) && parse_int(cols[5], a.altitude) && parse_int(cols[6], a.pressure);
      p.attitude = a;
    }
    if (!ok) throw DataError(at_line(source, line_no) + "malformed integer field");
    if (p.pen != 0 && p.pen != 1) throw DataError(at_line(source, line_no) + "pen status must be 0 or 1");
    if (!sample.points.empty() && p.t < sample.points.back().t) {
      throw DataError(at_line(source, line_no) + "timestamps must be nondecreasing");
    }
    sample.points.push_back(p);
  }
  if (sample.points.size() != declared) {
    throw DataError(at_line(source, line_no) + "point count mismatch: header says " + std::to_string(declared) +
                    ", found " + std::to_string(sample.points.size()));
  }
  if (sample.points.size() < 2) throw DataError(std::string(source) + ": a signature needs at least 2 points");
  return sample;
}

SignatureCorpus load_svc(const std::filesystem::path& root, int genuine_per_writer) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw DataError("signature directory not found: " + root.string());
  static const std::regex name_re(R"(^[Uu](\d+)[Ss](\d+)\.[Tt][Xx][Tt]$)");

  // writer number -> sample number -> path
  std::map<int, std::map<int, fs::path>> files;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    std::smatch m;
    if (!std::regex_match(name, m, name_re)) continue;
    const int writer = std::stoi(m[1].str());
    const int index = std::stoi(m[2].str());
    if (index < 1 || index > genuine_per_writer) continue;
    if (!files[writer].emplace(index, entry.path()).second) {
      throw DataError("duplicate signature file for writer " + std::to_string(writer) + " sample " +
                      std::to_string(index));
    }
  }
  if (files.empty()) throw DataError("no signature files found in " + root.string());

  SignatureCorpus corpus;
  for (const auto& [writer_no, by_index] : files) {
    const SubjectId id = static_cast<SubjectId>(corpus.writers.size());
    corpus.writers.push_back(Subject{id, "U" + std::to_string(writer_no)});
    auto& group = corpus.samples.emplace_back();
    for (const auto& [index, path] : by_index) {
      SignatureSample s = parse_svc_sample(read_file(path), path.string());
      s.writer = id;
      s.index = index;
      group.push_back(std::move(s));
    }
  }
  return corpus;
}

void write_svc_sample(std::ostream& os, const SignatureSample& sample) {
  const bool seven = !sample.points.empty() && sample.points.front().attitude.has_value();
  os << sample.points.size() << '\n';
  for (const auto& p : sample.points) {
    os << p.x << ' ' << p.y << ' ' << p.t << ' ' << p.pen;
    if (seven) {
      const PenAttitude a = p.attitude.value_or(PenAttitude{});
      os << ' ' << a.azimuth << ' ' << a.altitude << ' ' << a.pressure;
    }
    os << '\n';
  }
}

DirectionHistogram::DirectionHistogram(double delta_alpha_deg) : delta_alpha_(delta_alpha_deg) {
  if (!(delta_alpha_deg > 0.0) || delta_alpha_deg > 360.0) {
    throw std::invalid_argument("delta_alpha must be in (0, 360] degrees");
  }
  bins_.assign(static_cast<std::size_t>(std::ceil(360.0 / delta_alpha_deg)), 0.0);
}

void DirectionHistogram::add_angle(double degrees) {
  double a = std::fmod(degrees, 360.0);
  if (a < 0.0) a += 360.0;
  const std::size_t count = bins_.size();
  auto lo = static_cast<std::size_t>(a / delta_alpha_);
  if (lo >= count) lo = count - 1;
  const double centre = static_cast<double>(lo) * delta_alpha_;
  const double width = std::min(delta_alpha_, 360.0 - centre);
  const double upper_share = std::clamp((a - centre) / width, 0.0, 1.0);
  bins_[lo] += 1.0 - upper_share;
  bins_[(lo + 1) % count] += upper_share;
  ++segments_;
}

void DirectionHistogram::finish() {
  double total = 0.0;
  for (double b : bins_) total += b;
  if (total > 0.0) {
    for (double& b : bins_) b /= total;
  }
}

DirectionHistogram DirectionHistogram::from_sample(const SignatureSample& sample, double delta_alpha_deg) {
  DirectionHistogram h(delta_alpha_deg);
  const auto& pts = sample.points;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i - 1].pen != 1 || pts[i].pen != 1) continue;
    const double dx = static_cast<double>(pts[i].x) - pts[i - 1].x;
    const double dy = static_cast<double>(pts[i].y) - pts[i - 1].y;
    if (dx == 0.0 && dy == 0.0) continue;
    h.add_angle(std::atan2(dy, dx) * 180.0 / std::numbers::pi);
  }
  h.finish();
  return h;
}

SignatureScore baseline_score(std::span<const DirectionHistogram> templates, const DirectionHistogram& probe) {
  if (templates.empty()) throw std::invalid_argument("baseline_score needs at least one template");
  if (probe.empty()) return SignatureScore{0.0, true};
  double best = 0.0;
  for (const auto& t : templates) {
    if (t.bins().size() != probe.bins().size()) {
      throw std::invalid_argument("template and probe histograms use different delta_alpha");
    }
    double overlap = 0.0;
    for (std::size_t b = 0; b < t.bins().size(); ++b) overlap += std::min(t.bins()[b], probe.bins()[b]);
    best = std::max(best, overlap);
  }
  return SignatureScore{std::clamp(best, 0.0, 1.0), false};
}

SignatureScore baseline_score(std::span<const SignatureSample> templates, const SignatureSample& probe,
                              double delta_alpha_deg) {
  std::vector<DirectionHistogram> hs;
  hs.reserve(templates.size());
  for (const auto& t : templates) hs.push_back(DirectionHistogram::from_sample(t, delta_alpha_deg));
  return baseline_score(hs, DirectionHistogram::from_sample(probe, delta_alpha_deg));
}

ScoreMatrix::ScoreMatrix(std::vector<std::string> subjects, std::vector<std::string> items,
                         std::vector<double> values)
    : subjects_(std::move(subjects)), items_(std::move(items)), values_(std::move(values)) {
  if (values_.size() != subjects_.size() * items_.size()) {
    throw DataError("score matrix is not rectangular");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!(v >= 0.0 && v <= 1.0)) {
      throw DataError("score " + format_real(v) + " for item '" + items_[i / subjects_.size()] +
                      "' is outside [0, 1]");
    }
  }
}

ScoreMatrix read_score_matrix(std::istream& is, std::string_view source) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> subjects;
  std::vector<std::string> items;
  std::vector<double> values;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (!have_header) {
      if (cells.size() < 2) throw DataError(at_line(source, line_no) + "header needs item column and subjects");
      std::unordered_set<std::string_view> seen;
      for (std::size_t c = 1; c < cells.size(); ++c) {
        if (!seen.insert(cells[c]).second) {
          throw DataError(at_line(source, line_no) + "duplicate subject label '" + std::string(cells[c]) + "'");
        }
        subjects.emplace_back(cells[c]);
      }
      have_header = true;
      continue;
    }
    if (cells.size() != subjects.size() + 1) {
      throw DataError(at_line(source, line_no) + "ragged row: expected " + std::to_string(subjects.size() + 1) +
                      " cells, found " + std::to_string(cells.size()));
    }
    items.emplace_back(cells[0]);
    for (std::size_t c = 1; c < cells.size(); ++c) {
      const auto v = parse_real(cells[c]);
      if (!v) throw DataError(at_line(source, line_no) + "invalid number '" + std::string(cells[c]) + "'");
      if (!(*v >= 0.0 && *v <= 1.0)) {
        throw DataError(at_line(source, line_no) + "score " + std::string(cells[c]) + " outside [0, 1]");
      }
      values.push_back(*v);
    }
  }
  if (!have_header) throw DataError(std::string(source) + ": empty score matrix file");
  return ScoreMatrix(std::move(subjects), std::move(items), std::move(values));
}

ScoreMatrix load_score_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open score matrix " + path.string());
  return read_score_matrix(in, path.string());
}

void write_score_matrix(std::ostream& os, const ScoreMatrix& matrix) {
  auto check = [](const std::string& cell) {
    if (cell.find_first_of(",\r\n") != std::string::npos) {
      throw DataError("label '" + cell + "' cannot be written to CSV (contains a separator)");
    }
  };
  os << "item_id";
  for (const auto& s : matrix.subjects()) {
    check(s);
    os << ',' << s;
  }
  os << '\n';
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    check(matrix.items()[r]);
    os << matrix.items()[r];
    for (double v : matrix.row(r)) os << ',' << format_real(v);
    os << '\n';
  }
}

}  // namespace fda
