#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "fda/error.hpp"
#include "fda/signature.hpp"
#include "fda/synthetic.hpp"
#include "helpers.hpp"

using namespace fda;
using fda::testing::TempDir;

namespace {

SignatureSample line(int dx, int dy, int n = 10) {
  SignatureSample s;
  for (int i = 0; i < n; ++i) s.points.push_back({i * dx, i * dy, i * 10, 1, std::nullopt});
  return s;
}

double intersection(const DirectionHistogram& a, const DirectionHistogram& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.bins().size(); ++i) sum += std::min(a.bins()[i], b.bins()[i]);
  return sum;
}

std::string svc_text(int count, int lines) {
  std::string out = std::to_string(count) + "\n";
  for (int i = 0; i < lines; ++i) out += std::to_string(i) + " " + std::to_string(2 * i) + " " + std::to_string(10 * i) + " 1\n";
  return out;
}

}  // namespace

TEST_CASE("SVC sample parsing") {
  const auto s = parse_svc_sample(svc_text(120, 120), "U1S1.TXT");
  CHECK(s.points.size() == 120);
  CHECK(s.points[5].y == 10);
  CHECK_FALSE(s.points[0].attitude.has_value());

  const auto seven = parse_svc_sample("2\n1 2 0 1 100 40 300\n3 4 10 0 110 41 0\n", "x");
  REQUIRE(seven.points[0].attitude.has_value());
  CHECK(seven.points[0].attitude->pressure == 300);
  CHECK(seven.points[1].pen == 0);

  CHECK_THROWS_AS(parse_svc_sample(svc_text(5, 4), "U1S1.TXT"), DataError);
  CHECK_THROWS_AS(parse_svc_sample("2\n1 2 10 1\n1 2 5 1\n", "x"), DataError);  // time goes back
  CHECK_THROWS_AS(parse_svc_sample("1\n1 2 10 1\n", "x"), DataError);
  CHECK_THROWS_AS(parse_svc_sample("2\n1 2 10 1\n1 2 x 1\n", "x"), DataError);
  CHECK_THROWS_AS(parse_svc_sample("2\n1 2 10 1\n1 2 11 3\n", "x"), DataError);
  try {
    parse_svc_sample("3\n1 2 10 1\n1 2 11 1\n1 2\n", "U3S2.TXT");
    FAIL("expected an error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("U3S2.TXT:4") != std::string::npos);
  }
}

TEST_CASE("SVC write and re-read") {
  const auto s = make_synthetic_signature(3, 7);
  std::stringstream ss;
  write_svc_sample(ss, s);
  const auto back = parse_svc_sample(ss.str(), "mem");
  REQUIRE(back.points.size() == s.points.size());
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    CHECK(back.points[i].x == s.points[i].x);
    CHECK(back.points[i].t == s.points[i].t);
    CHECK(back.points[i].pen == s.points[i].pen);
  }
}

TEST_CASE("SVC directory loading skips forgeries") {
  TempDir dir;
  fda::testing::write_svc_corpus(dir.path(), 12, 20, 20);
  const auto corpus = load_svc(dir.path());
  CHECK(corpus.writers.size() == 12);
  CHECK(corpus.sample_count() == 240);
  // Numeric writer order: U2 precedes U10.
  CHECK(corpus.writers[1].label == "U2");
  CHECK(corpus.writers[9].label == "U10");
  CHECK(corpus.samples[9].front().index == 1);
  CHECK(corpus.samples[9].back().index == 20);

  TempDir empty;
  CHECK_THROWS_AS(load_svc(empty.path()), DataError);
}

TEST_CASE("direction histogram memberships") {
  DirectionHistogram h(25.0);
  CHECK(h.bins().size() == 15);
  h.add_angle(10.0);
  CHECK(h.bins()[0] == doctest::Approx(0.6));
  CHECK(h.bins()[1] == doctest::Approx(0.4));

  DirectionHistogram wrap(25.0);
  wrap.add_angle(355.0);  // last bin centred at 350 spans 10 degrees
  CHECK(wrap.bins()[14] == doctest::Approx(0.5));
  CHECK(wrap.bins()[0] == doctest::Approx(0.5));

  DirectionHistogram neg(25.0);
  neg.add_angle(-90.0);
  neg.add_angle(270.0);
  neg.finish();
  double total = 0.0;
  for (double b : neg.bins()) total += b;
  CHECK(total == doctest::Approx(1.0));
  CHECK(neg.bins()[10] == doctest::Approx(0.2));
  CHECK(neg.bins()[11] == doctest::Approx(0.8));

  CHECK(DirectionHistogram(30.0).bins().size() == 12);
  CHECK(DirectionHistogram(7.0).bins().size() == 52);
}

TEST_CASE("baseline matcher examples") {
  const auto sample = make_synthetic_signature(0, 1);
  CHECK(baseline_score(std::vector<SignatureSample>{sample}, sample, 25.0).value == doctest::Approx(1.0).epsilon(1e-9));

  const auto horizontal = line(1, 0);
  const auto vertical = line(0, 1);
  CHECK(baseline_score(std::vector<SignatureSample>{horizontal}, vertical, 25.0).value == 0.0);

  const auto a = make_synthetic_signature(1, 1);
  const auto b = make_synthetic_signature(2, 1);
  const auto probe = make_synthetic_signature(2, 3);
  const auto ha = DirectionHistogram::from_sample(a, 25.0);
  const auto hb = DirectionHistogram::from_sample(b, 25.0);
  const auto hp = DirectionHistogram::from_sample(probe, 25.0);
  const double expected = std::max(intersection(ha, hp), intersection(hb, hp));
  CHECK(baseline_score(std::vector<SignatureSample>{a, b}, probe, 25.0).value == doctest::Approx(expected).epsilon(1e-12));
  CHECK(baseline_score(std::vector<SignatureSample>{a, probe}, probe, 25.0).value == doctest::Approx(1.0));

  SignatureSample still;
  still.points = {{5, 5, 0, 1, std::nullopt}, {5, 5, 10, 1, std::nullopt}, {9, 9, 20, 0, std::nullopt}};
  const auto none = baseline_score(std::vector<SignatureSample>{a}, still, 25.0);
  CHECK(none.degenerate);
  CHECK(none.value == 0.0);
}

TEST_CASE("baseline matcher symmetry and invariances") {
  for (int w = 0; w < 20; ++w) {
    const auto x = make_synthetic_signature(w, 2);
    const auto y = make_synthetic_signature((w * 7 + 3) % 20, 5);
    const double xy = baseline_score(std::vector<SignatureSample>{x}, y, 25.0).value;
    const double yx = baseline_score(std::vector<SignatureSample>{y}, x, 25.0).value;
    CHECK(xy == doctest::Approx(yx).epsilon(1e-12));
    CHECK(xy >= 0.0);
    CHECK(xy <= 1.0);

    auto moved = y;
    for (auto& p : moved.points) {
      p.x += 1234 - 50 * w;
      p.y -= 777;
      p.t += 98765;
    }
    CHECK(baseline_score(std::vector<SignatureSample>{x}, moved, 25.0).value == doctest::Approx(xy).epsilon(1e-12));
  }
}

TEST_CASE("score matrix CSV") {
  std::stringstream ok("item_id,a,b\ni0,0.25,1\ni1,0,0.5\n");
  const auto m = read_score_matrix(ok);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 2);
  CHECK(m.at(1, 1) == 0.5);
  std::stringstream out;
  write_score_matrix(out, m);
  std::stringstream again(out.str());
  CHECK(read_score_matrix(again) == m);

  std::stringstream range("item_id,a\ni0,1.2\n");
  CHECK_THROWS_AS(read_score_matrix(range), DataError);
  std::stringstream ragged("item_id,a,b\ni0,0.1\n");
  CHECK_THROWS_AS(read_score_matrix(ragged), DataError);
  std::stringstream empty("");
  CHECK_THROWS_AS(read_score_matrix(empty), DataError);
  std::stringstream dup("item_id,a,a\ni0,0.1,0.2\n");
  CHECK_THROWS_AS(read_score_matrix(dup), DataError);
  std::stringstream junk("item_id,a\ni0,abc\n");
  CHECK_THROWS_AS(read_score_matrix(junk), DataError);
  CHECK_THROWS_AS(load_score_matrix("/nonexistent/scores.csv"), DataError);
}

TEST_CASE("600 by 40 matrix round trip through a file") {
  std::vector<std::string> subjects, items;
  std::vector<double> values;
  for (int s = 0; s < 40; ++s) subjects.push_back("a" + std::to_string(s) + "+U" + std::to_string(s + 1));
  for (int i = 0; i < 600; ++i) {
    items.push_back("item" + std::to_string(i));
    for (int s = 0; s < 40; ++s) values.push_back(std::fmod((i * 40 + s) * 0.6180339887498949, 1.0));
  }
  const ScoreMatrix m(subjects, items, values);
  TempDir dir;
  {
    std::ofstream out(dir / "m.csv");
    write_score_matrix(out, m);
  }
  const auto back = load_score_matrix(dir / "m.csv");
  CHECK(back.rows() == 600);
  CHECK(back.cols() == 40);
  CHECK(back == m);
}
