#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fda/classifiers.hpp"
#include "fda/error.hpp"
#include "oracles.hpp"

using namespace fda;
using fda::testing::DenseDoc;

namespace {

Vocabulary make_vocab(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("f" + std::to_string(i));
  return Vocabulary(FeatureModel{}, n, names, std::vector<std::uint64_t>(n, 1));
}

std::vector<Subject> make_subjects(int n) {
  std::vector<Subject> out;
  for (int i = 0; i < n; ++i) out.push_back({i, "s" + std::to_string(i)});
  return out;
}

FeatureVector to_vector(const DenseDoc& counts) {
  FeatureVector v;
  for (std::size_t f = 0; f < counts.size(); ++f) {
    if (counts[f] == 0) continue;
    v.entries.emplace_back(static_cast<FeatureId>(f), counts[f]);
    v.total += counts[f];
  }
  return v;
}

std::vector<LabeledVector> to_training(const std::vector<DenseDoc>& docs, const std::vector<int>& labels) {
  std::vector<LabeledVector> out;
  for (std::size_t i = 0; i < docs.size(); ++i) out.push_back({to_vector(docs[i]), labels[i]});
  return out;
}

}  // namespace

TEST_CASE("smoothed parameter estimate") {
  // One subject, five features, N_s = 10, N_{f0,s} = 3.
  const std::vector<DenseDoc> docs{{3, 2, 2, 2, 1}};
  const auto train = to_training(docs, {0});
  const auto raw = mnb_train(train, make_vocab(5), 0.0, make_subjects(1));
  CHECK(std::exp(raw.log_param(0, 0)) == doctest::Approx(0.3).epsilon(1e-9));

  const std::vector<DenseDoc> zero{{0, 4, 2, 2, 2}};
  const auto floored = mnb_train(to_training(zero, {0}), make_vocab(5), 0.0, make_subjects(1));
  const double expected = kAlphaFloor / (10.0 + 5.0 * kAlphaFloor);
  CHECK(std::isfinite(floored.log_param(0, 0)));
  CHECK(std::exp(floored.log_param(0, 0)) == doctest::Approx(expected).epsilon(1e-9));
  CHECK(std::exp(floored.log_param(0, 0)) == doctest::Approx(1e-11).epsilon(1e-6));

  const auto laplace = mnb_train(train, make_vocab(5), 1.0, make_subjects(1));
  CHECK(std::exp(laplace.log_param(0, 0)) == doctest::Approx(4.0 / 15.0).epsilon(1e-12));
}

TEST_CASE("posterior examples") {
  // Identical parameter columns.
  const std::vector<DenseDoc> same{{1, 1}, {1, 1}};
  const auto sym = mnb_train(to_training(same, {0, 1}), make_vocab(2), 0.5, make_subjects(2));
  const auto p = mnb_posterior(sym, to_vector({3, 1}));
  CHECK(p.probabilities[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p.probabilities[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(mnb_attribute(sym, to_vector({3, 1})) == 0);

  // A has p = (0.9, 0.1), B has (0.1, 0.9); doc {a:1}.
  const std::vector<DenseDoc> skew{{9, 1}, {1, 9}};
  const auto model = mnb_train(to_training(skew, {0, 1}), make_vocab(2), 0.0, make_subjects(2));
  const auto q = mnb_posterior(model, to_vector({1, 0}));
  CHECK(q.probabilities[0] == doctest::Approx(0.9).epsilon(1e-9));
  CHECK(q.probabilities[1] == doctest::Approx(0.1).epsilon(1e-9));
  CHECK_FALSE(q.degenerate);
  CHECK(mnb_attribute(model, to_vector({1, 0})) == 0);
  CHECK(mnb_attribute(model, to_vector({0, 1})) == 1);

  const auto empty = mnb_posterior(model, FeatureVector{});
  CHECK(empty.degenerate);
  CHECK(empty.probabilities[0] == doctest::Approx(0.5));
}

TEST_CASE("argmax tie rule") {
  const std::vector<double> tie{0.5, 0.5};
  CHECK(argmax_subject(tie) == 0);
  const std::vector<double> later{0.2, 0.4, 0.4};
  CHECK(argmax_subject(later) == 1);
}

TEST_CASE("posterior equals the literal multinomial likelihood ratio") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int S = 3;
    const std::size_t F = 3;
    std::vector<DenseDoc> docs;
    std::vector<int> labels;
    for (int s = 0; s < S; ++s) {
      for (int d = 0; d < 2; ++d) {
        DenseDoc doc(F);
        for (auto& c : doc) c = rng() % 4;
        docs.push_back(doc);
        labels.push_back(s);
      }
    }
    const double alpha = trial % 2 ? 1.0 : 0.01;
    const auto model = mnb_train(to_training(docs, labels), make_vocab(F), alpha, make_subjects(S));
    const auto params = fda::testing::oracle_mnb_params(docs, labels, S, F, alpha);
    DenseDoc probe(F);
    for (auto& c : probe) c = rng() % 5;
    if (to_vector(probe).total == 0) probe[0] = 1;
    const auto expected = fda::testing::oracle_mnb_posterior(params, probe);
    const auto got = mnb_posterior(model, to_vector(probe));
    for (int s = 0; s < S; ++s) CHECK(got.probabilities[s] == doctest::Approx(expected[s]).epsilon(1e-9));
  }
}

TEST_CASE("parameter columns sum to one") {
  std::mt19937_64 rng(5);
  for (double alpha : {0.01, 1.0}) {
    std::vector<DenseDoc> docs;
    std::vector<int> labels;
    for (int s = 0; s < 4; ++s) {
      DenseDoc doc(50);
      for (auto& c : doc) c = rng() % 3;
      docs.push_back(doc);
      labels.push_back(s);
    }
    const auto model = mnb_train(to_training(docs, labels), make_vocab(50), alpha, make_subjects(4));
    for (int s = 0; s < 4; ++s) {
      double sum = 0.0;
      for (FeatureId f = 0; f < 50; ++f) sum += std::exp(model.log_param(f, s));
      CHECK(std::abs(sum - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("posteriors are normalized") {
  std::mt19937_64 rng(9);
  std::vector<DenseDoc> docs;
  std::vector<int> labels;
  for (int s = 0; s < 6; ++s) {
    for (int d = 0; d < 3; ++d) {
      DenseDoc doc(30);
      for (auto& c : doc) c = rng() % 6;
      docs.push_back(doc);
      labels.push_back(s);
    }
  }
  const auto model = mnb_train(to_training(docs, labels), make_vocab(30), 0.01, make_subjects(6));
  const auto pnb = pnb_train(to_training(docs, labels), make_vocab(30), 0.01, make_subjects(6));
  for (int trial = 0; trial < 100; ++trial) {
    DenseDoc probe(30);
    for (auto& c : probe) c = rng() % 40;
    for (const auto& post : {mnb_posterior(model, to_vector(probe)), pnb_posterior(pnb, to_vector(probe))}) {
      double sum = 0.0;
      for (double v : post.probabilities) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        sum += v;
      }
      CHECK(std::abs(sum - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("raising a count never lowers its parameter") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<DenseDoc> docs{{rng() % 5, rng() % 5, rng() % 5 + 1}, {1, 1, 1}};
    const double alpha = trial % 3 == 0 ? 0.0 : 0.01 * trial;
    const auto before = mnb_train(to_training(docs, {0, 1}), make_vocab(3), alpha, make_subjects(2));
    const FeatureId f = rng() % 3;
    docs[0][f] += 1 + rng() % 3;
    const auto after = mnb_train(to_training(docs, {0, 1}), make_vocab(3), alpha, make_subjects(2));
    CHECK(after.log_param(f, 0) >= before.log_param(f, 0));
  }
}

TEST_CASE("disjoint vocabularies are attributed perfectly") {
  const int S = 5;
  const std::size_t per = 8;
  std::vector<DenseDoc> docs;
  std::vector<int> labels;
  for (int s = 0; s < S; ++s) {
    for (int d = 0; d < 4; ++d) {
      DenseDoc doc(S * per, 0);
      for (std::size_t w = 0; w < per; ++w) doc[s * per + w] = 1 + (d + w) % 3;
      docs.push_back(doc);
      labels.push_back(s);
    }
  }
  const auto model = mnb_train(to_training(docs, labels), make_vocab(S * per), 0.01, make_subjects(S));
  for (int s = 0; s < S; ++s) {
    DenseDoc probe(S * per, 0);
    probe[s * per + 2] = 2;
    probe[s * per + 5] = 1;
    CHECK(mnb_attribute(model, to_vector(probe)) == s);
  }
}

TEST_CASE("Poisson rates and posterior") {
  // N_{f,s} = 4 over D_s = 2 documents, alpha 0.
  const std::vector<DenseDoc> docs{{3, 1}, {1, 1}};
  const auto model = pnb_train(to_training(docs, {0, 0}), make_vocab(2), 0.0, make_subjects(1));
  CHECK(model.rate(0, 0) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(model.doc_counts[0] == 2);

  const std::vector<DenseDoc> same{{2, 1}, {2, 1}};
  const auto sym = pnb_train(to_training(same, {0, 1}), make_vocab(2), 0.1, make_subjects(2));
  const auto p = pnb_posterior(sym, to_vector({5, 0}));
  CHECK(p.probabilities[0] == doctest::Approx(0.5).epsilon(1e-12));

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<DenseDoc> tr;
    std::vector<int> labels;
    for (int s = 0; s < 3; ++s) {
      for (int d = 0; d < 1 + trial % 3; ++d) {
        tr.push_back({rng() % 4, rng() % 4, rng() % 4});
        labels.push_back(s);
      }
    }
    const double alpha = 0.01 + 0.1 * (trial % 4);
    const auto m = pnb_train(to_training(tr, labels), make_vocab(3), alpha, make_subjects(3));
    std::vector<std::vector<double>> lambda(3, std::vector<double>(3, 0.0));
    std::vector<double> docs_of(3, 0.0);
    for (std::size_t d = 0; d < tr.size(); ++d) {
      docs_of[labels[d]] += 1.0;
      for (int f = 0; f < 3; ++f) lambda[labels[d]][f] += static_cast<double>(tr[d][f]);
    }
    for (int s = 0; s < 3; ++s) {
      for (int f = 0; f < 3; ++f) lambda[s][f] = (lambda[s][f] + alpha) / docs_of[s];
    }
    const DenseDoc probe{rng() % 5, rng() % 5, 1 + rng() % 5};
    const auto expected = fda::testing::oracle_pnb_posterior(lambda, probe);
    const auto got = pnb_posterior(m, to_vector(probe));
    for (int s = 0; s < 3; ++s) CHECK(got.probabilities[s] == doctest::Approx(expected[s]).epsilon(1e-9));
  }
}

TEST_CASE("model persistence is bit exact") {
  std::mt19937_64 rng(21);
  std::vector<DenseDoc> docs;
  std::vector<int> labels;
  for (int s = 0; s < 3; ++s) {
    for (int d = 0; d < 3; ++d) {
      DenseDoc doc(12);
      for (auto& c : doc) c = rng() % 7;
      docs.push_back(doc);
      labels.push_back(s);
    }
  }
  for (int kind = 0; kind < 2; ++kind) {
    const auto train = to_training(docs, labels);
    Classifier original = kind == 0 ? Classifier(mnb_train(train, make_vocab(12), 0.0, make_subjects(3)))
                                    : Classifier(pnb_train(train, make_vocab(12), 0.37, make_subjects(3)));
    std::stringstream ss;
    save_model(ss, original);
    const std::string first = ss.str();
    const Classifier loaded = load_model(ss);
    CHECK(loaded.index() == original.index());
    std::stringstream again;
    save_model(again, loaded);
    CHECK(again.str() == first);
    CHECK(vocabulary(loaded).features() == vocabulary(original).features());
    CHECK(subjects(loaded)[2].label == "s2");
    for (const auto& doc : docs) {
      const auto a = posterior(original, to_vector(doc)).probabilities;
      const auto b = posterior(loaded, to_vector(doc)).probabilities;
      CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
    }
    if (kind == 0) {
      const auto& x = std::get<MnbModel>(original).log_params;
      const auto& y = std::get<MnbModel>(loaded).log_params;
      REQUIRE(x.size() == y.size());
      CHECK(std::memcmp(x.data(), y.data(), x.size() * sizeof(double)) == 0);
    }
  }
}

TEST_CASE("training and loading errors") {
  const std::vector<DenseDoc> docs{{1, 2}};
  CHECK_THROWS_AS(mnb_train(to_training(docs, {0}), make_vocab(2), 0.1, make_subjects(2)), DataError);
  CHECK_THROWS_AS(pnb_train(to_training(docs, {0}), make_vocab(2), 0.1, make_subjects(2)), DataError);
  CHECK_THROWS_AS(mnb_train(to_training(docs, {3}), make_vocab(2), 0.1, make_subjects(1)), DataError);
  CHECK_THROWS_AS(mnb_train(to_training(docs, {0}), make_vocab(2), -1.0, make_subjects(1)), ConfigError);

  std::stringstream bad("fda-model 99\n");
  CHECK_THROWS_AS(load_model(bad), DataError);
  std::stringstream truncated("fda-model 1\nclassifier mnb\n");
  CHECK_THROWS_AS(load_model(truncated), DataError);
}
