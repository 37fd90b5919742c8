#include <random>

#include "doctest.h"
#include "fda/error.hpp"
#include "fda/fusion.hpp"

using namespace fda;

TEST_CASE("average fusion examples") {
  CHECK(fuse(std::vector<double>{0.8}, std::vector<double>{0.6})[0] == doctest::Approx(0.7));
  const std::vector<double> x{0.1, 0.75, 0.3};
  CHECK(fuse(x, x) == x);
  CHECK(fuse(std::vector<double>{1.0, 0.0}, std::vector<double>{0.0, 1.0}) == std::vector<double>{0.5, 0.5});
  CHECK_THROWS_AS(fuse(std::vector<double>{0.1}, std::vector<double>{0.1, 0.2}), std::invalid_argument);
  CHECK_THROWS_AS(fuse(std::vector<double>{1.5}, std::vector<double>{0.1}), std::invalid_argument);
}

TEST_CASE("alternate operators") {
  const std::vector<double> a{0.8, 0.3};
  const std::vector<double> b{0.6, 0.5};
  const auto sum = fuse(a, b, FusionOperator::bounded_sum);
  CHECK(sum[0] == 1.0);
  CHECK(sum[1] == doctest::Approx(0.8));
  const auto prod = fuse(a, b, FusionOperator::product);
  CHECK(prod[0] == doctest::Approx(0.48));
  CHECK(prod[1] == doctest::Approx(0.15));
  for (auto op : {FusionOperator::average, FusionOperator::bounded_sum, FusionOperator::product}) {
    CHECK(parse_fusion_operator(to_string(op)) == op);
  }
  CHECK_THROWS_AS(parse_fusion_operator("max"), ConfigError);
}

TEST_CASE("decisions") {
  const auto d = decide(std::vector<double>{0.7, 0.2});
  CHECK(d.subject == 0);
  CHECK_FALSE(d.tie);
  const auto t = decide(std::vector<double>{0.5, 0.5});
  CHECK(t.subject == 0);
  CHECK(t.tie);
  CHECK(decide(std::vector<double>{0.1, 0.4, 0.3}).subject == 1);
}

TEST_CASE("fusion properties") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t S = 2 + rng() % 20;
    std::vector<double> a(S), b(S);
    for (std::size_t j = 0; j < S; ++j) {
      a[j] = unit(rng);
      b[j] = unit(rng);
    }
    const auto f = fuse(a, b);
    CHECK(f == fuse(b, a));
    for (std::size_t j = 0; j < S; ++j) {
      CHECK(f[j] >= std::min(a[j], b[j]));
      CHECK(f[j] <= std::max(a[j], b[j]));
    }
    // Put both strict maxima at the same index.
    const std::size_t star = rng() % S;
    a[star] = 1.0;
    b[star] = 1.0;
    for (std::size_t j = 0; j < S; ++j) {
      if (j != star) {
        a[j] = std::min(a[j], 0.99);
        b[j] = std::min(b[j], 0.99);
      }
    }
    const auto d = decide(fuse(a, b));
    CHECK(d.subject == static_cast<SubjectId>(star));
    CHECK_FALSE(d.tie);
  }
}

TEST_CASE("matrix fusion keeps labels and checks shape") {
  const ScoreMatrix a({"x", "y"}, {"i0"}, {0.2, 0.4});
  const ScoreMatrix b({"x", "y"}, {"i0"}, {0.6, 0.0});
  const auto f = fuse(a, b);
  CHECK(f.subjects() == a.subjects());
  CHECK(f.at(0, 0) == doctest::Approx(0.4));
  CHECK(f.at(0, 1) == doctest::Approx(0.2));
  const ScoreMatrix c({"x"}, {"i0"}, {0.6});
  CHECK_THROWS_AS(fuse(a, c), DataError);
}
