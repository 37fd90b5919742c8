#include "fda/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "fda/error.hpp"
#include "fda/text.hpp"

namespace fda {
namespace {

struct Tally {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

Tally tally(const ClaimSet& claims, double threshold) {
  Tally t;
  for (const auto& c : claims.claims) {
    const bool accepted = c.score >= threshold;
    if (c.genuine) {
      accepted ? ++t.tp : ++t.fn;
    } else {
      accepted ? ++t.fp : ++t.tn;
    }
  }
  return t;
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

void check_truth(const ScoreMatrix& scores, std::span<const SubjectId> truth) {
  if (truth.size() != scores.rows()) {
    throw std::invalid_argument("truth has " + std::to_string(truth.size()) + " labels for " +
                                std::to_string(scores.rows()) + " items");
  }
  for (SubjectId t : truth) {
    if (t < 0 || static_cast<std::size_t>(t) >= scores.cols()) {
      throw std::invalid_argument("true subject id " + std::to_string(t) + " outside the score matrix");
    }
  }
}

std::vector<double> parse_row(std::string_view line, std::size_t expected, std::size_t line_no) {
  const auto cells = split(line, ',');
  if (cells.size() != expected) {
    throw DataError("CSV line " + std::to_string(line_no) + ": expected " + std::to_string(expected) + " cells");
  }
  std::vector<double> out;
  for (auto c : cells) {
    const auto v = parse_real(c);
    if (!v) throw DataError("CSV line " + std::to_string(line_no) + ": invalid number '" + std::string(c) + "'");
    out.push_back(*v);
  }
  return out;
}

}  // namespace

AccuracyReport accuracy(std::span<const std::pair<SubjectId, SubjectId>> decisions) {
  if (decisions.empty()) throw std::invalid_argument("accuracy of an empty decision list");
  std::size_t correct = 0;
  for (const auto& [predicted, truth] : decisions) correct += predicted == truth;
  AccuracyReport r;
  r.n = decisions.size();
  r.method = CiMethod::wald_over_items;
  r.accuracy = ratio(correct, r.n);
  const double z = boost::math::quantile(boost::math::normal_distribution<double>(), 0.975);
  const double half = z * std::sqrt(r.accuracy * (1.0 - r.accuracy) / static_cast<double>(r.n));
  r.ci_low = r.accuracy - half;
  r.ci_high = r.accuracy + half;
  return r;
}

AccuracyReport accuracy_over_folds(std::span<const double> folds) {
  if (folds.empty()) throw std::invalid_argument("accuracy over an empty fold list");
  AccuracyReport r;
  r.n = folds.size();
  r.method = CiMethod::student_t_over_folds;
  double sum = 0.0;
  for (double a : folds) sum += a;
  r.accuracy = sum / static_cast<double>(r.n);
  if (r.n < 2) {
    r.ci_low = r.ci_high = r.accuracy;
    r.degenerate = true;
    return r;
  }
  double ss = 0.0;
  for (double a : folds) ss += (a - r.accuracy) * (a - r.accuracy);
  const double sd = std::sqrt(ss / static_cast<double>(r.n - 1));
  const boost::math::students_t_distribution<double> dist(static_cast<double>(r.n - 1));
  const double half = boost::math::quantile(dist, 0.975) * sd / std::sqrt(static_cast<double>(r.n));
  r.ci_low = r.accuracy - half;
  r.ci_high = r.accuracy + half;
  return r;
}

ClaimSet expand_claims(const ScoreMatrix& scores, std::span<const SubjectId> truth) {
  check_truth(scores, truth);
  ClaimSet set;
  set.claims.reserve(scores.rows() * scores.cols());
  for (std::size_t r = 0; r < scores.rows(); ++r) {
    for (std::size_t c = 0; c < scores.cols(); ++c) {
      const bool genuine = static_cast<SubjectId>(c) == truth[r];
      set.claims.push_back(Claim{r, static_cast<SubjectId>(c), scores.at(r, c), genuine});
      genuine ? ++set.genuine_count : ++set.imposter_count;
    }
  }
  return set;
}

std::vector<double> threshold_grid(std::size_t steps) {
  if (steps == 0) throw std::invalid_argument("threshold grid needs at least one step");
  std::vector<double> grid(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) grid[i] = static_cast<double>(i) / static_cast<double>(steps);
  return grid;
}

FScore fscore(const ClaimSet& claims, double threshold) {
  const Tally t = tally(claims, threshold);
  FScore f{0.0, t.tp, t.fp, t.fn, false};
  const std::size_t den = 2 * t.tp + t.fp + t.fn;
  if (den == 0) {
    f.undefined = true;
  } else {
    f.value = static_cast<double>(2 * t.tp) / static_cast<double>(den);
  }
  return f;
}

Curve fscore_curve(const ClaimSet& claims, std::span<const double> grid) {
  Curve c{"threshold", "threshold", "fscore", {}, 0.0};
  for (double t : grid) c.points.push_back({t, t, fscore(claims, t).value});
  return c;
}

Curve recall_curve(const ClaimSet& claims, std::span<const double> grid) {
  if (claims.genuine_count == 0) throw std::invalid_argument("recall needs at least one genuine claim");
  Curve c{"threshold", "threshold", "recall", {}, 0.0};
  for (double t : grid) {
    const Tally k = tally(claims, t);
    c.points.push_back({t, t, ratio(k.tp, k.tp + k.fn)});
  }
  return c;
}

std::pair<double, double> det_point(const ClaimSet& claims, double threshold) {
  const Tally k = tally(claims, threshold);
  return {ratio(k.fp, k.fp + k.tn), ratio(k.fn, k.tp + k.fn)};
}

Curve det_curve(const ClaimSet& claims, std::span<const double> grid) {
  Curve c{"threshold", "far", "frr", {}, 0.0};
  for (double t : grid) {
    const auto [far, frr] = det_point(claims, t);
    c.points.push_back({t, far, frr});
  }
  for (std::size_t i = 1; i < c.points.size(); ++i) {
    const auto& a = c.points[i - 1];
    const auto& b = c.points[i];
    c.area += std::abs(a.x - b.x) * (a.y + b.y) / 2.0;
  }
  return c;
}

std::vector<std::size_t> genuine_ranks(const ScoreMatrix& scores, std::span<const SubjectId> truth) {
  check_truth(scores, truth);
  std::vector<std::size_t> ranks(scores.rows());
  for (std::size_t r = 0; r < scores.rows(); ++r) {
    const auto row = scores.row(r);
    const double g = row[static_cast<std::size_t>(truth[r])];
    std::size_t rank = 1;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (static_cast<SubjectId>(c) != truth[r] && row[c] >= g) ++rank;
    }
    ranks[r] = rank;
  }
  return ranks;
}

Curve cmc_curve(const ScoreMatrix& scores, std::span<const SubjectId> truth) {
  if (scores.rows() == 0) throw std::invalid_argument("CMC of an empty score matrix");
  const auto ranks = genuine_ranks(scores, truth);
  std::vector<std::size_t> at_rank(scores.cols() + 1, 0);
  for (auto k : ranks) ++at_rank[k];
  Curve c{"rank", "rank", "identification_rate", {}, 0.0};
  std::size_t cumulative = 0;
  for (std::size_t k = 1; k <= scores.cols(); ++k) {
    cumulative += at_rank[k];
    const double kk = static_cast<double>(k);
    c.points.push_back({kk, kk, ratio(cumulative, ranks.size())});
  }
  return c;
}

std::size_t histogram_bin(double score, std::size_t bins) {
  const double clamped = std::clamp(score, 0.0, 1.0);
  return std::min(static_cast<std::size_t>(clamped * static_cast<double>(bins)), bins - 1);
}

ScoreHistogram msh(const ClaimSet& claims, std::size_t bins) {
  if (bins == 0) throw std::invalid_argument("histogram needs at least one bin");
  ScoreHistogram h;
  h.genuine.assign(bins, 0.0);
  h.imposter.assign(bins, 0.0);
  for (const auto& c : claims.claims) (c.genuine ? h.genuine : h.imposter)[histogram_bin(c.score, bins)] += 1.0;
  for (std::size_t b = 0; b < bins; ++b) {
    if (claims.genuine_count) h.genuine[b] /= static_cast<double>(claims.genuine_count);
    if (claims.imposter_count) h.imposter[b] /= static_cast<double>(claims.imposter_count);
    h.overlap += std::min(h.genuine[b], h.imposter[b]);
  }
  return h;
}

TTestResult paired_ttest(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw std::invalid_argument("paired t-test needs equal-length inputs");
  if (a.size() < 2) throw std::invalid_argument("paired t-test needs at least two items");
  const std::size_t n = a.size();
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = (a[i] - b[i]) - mean;
    ss += d * d;
  }
  TTestResult r;
  r.df = n - 1;
  if (ss == 0.0) {
    r.degenerate = true;
    r.p_value = mean != 0.0 ? 0.0 : 1.0;
    r.t = mean == 0.0 ? 0.0 : std::copysign(INFINITY, mean);
    return r;
  }
  const double se = std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
  r.t = mean / se;
  const boost::math::students_t_distribution<double> dist(static_cast<double>(r.df));
  r.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t)));
  return r;
}

void write_curve_csv(std::ostream& os, const Curve& curve) {
  os << curve.parameter_label << ',' << curve.x_label << ',' << curve.y_label << '\n';
  for (const auto& p : curve.points) {
    os << format_real(p.parameter) << ',' << format_real(p.x) << ',' << format_real(p.y) << '\n';
  }
}

Curve read_curve_csv(std::istream& is) {
  Curve c;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      const auto cells = split(line, ',');
      if (cells.size() != 3) throw DataError("curve CSV header must have 3 columns");
      c.parameter_label = cells[0];
      c.x_label = cells[1];
      c.y_label = cells[2];
      continue;
    }
    const auto v = parse_row(line, 3, line_no);
    c.points.push_back({v[0], v[1], v[2]});
  }
  if (line_no == 0) throw DataError("empty curve CSV");
  return c;
}

void write_histogram_csv(std::ostream& os, const ScoreHistogram& h) {
  os << "bin_low,bin_high,genuine,imposter\n";
  const double width = 1.0 / static_cast<double>(h.bins());
  for (std::size_t b = 0; b < h.bins(); ++b) {
    os << format_real(static_cast<double>(b) * width) << ',' << format_real(static_cast<double>(b + 1) * width)
       << ',' << format_real(h.genuine[b]) << ',' << format_real(h.imposter[b]) << '\n';
  }
}

ScoreHistogram read_histogram_csv(std::istream& is) {
  ScoreHistogram h;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line_no == 1) continue;
    const auto v = parse_row(line, 4, line_no);
    h.genuine.push_back(v[2]);
    h.imposter.push_back(v[3]);
    h.overlap += std::min(v[2], v[3]);
  }
  if (line_no == 0) throw DataError("empty histogram CSV");
  return h;
}

}  // namespace fda
