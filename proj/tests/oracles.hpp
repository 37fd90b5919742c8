// Brute-force reference implementations shared by the unit and acceptance
// tests. Each follows its formula literally and makes no attempt at speed.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace fda::testing {

// Dense per-document counts over a fixed feature list.
using DenseDoc = std::vector<std::uint64_t>;

inline double factorial(std::uint64_t n) {
  double r = 1.0;
  for (std::uint64_t i = 2; i <= n; ++i) r *= static_cast<double>(i);
  return r;
}

// p(f|s) = (N_fs + alpha) / (N_s + alpha n) from raw training documents.
inline std::vector<std::vector<double>> oracle_mnb_params(const std::vector<DenseDoc>& docs,
                                                          const std::vector<int>& labels, int subjects,
                                                          std::size_t features, double alpha) {
  std::vector<std::vector<double>> p(subjects, std::vector<double>(features));
  for (int s = 0; s < subjects; ++s) {
    std::vector<double> n_fs(features, 0.0);
    double n_s = 0.0;
    for (std::size_t d = 0; d < docs.size(); ++d) {
      if (labels[d] != s) continue;
      for (std::size_t f = 0; f < features; ++f) {
        n_fs[f] += static_cast<double>(docs[d][f]);
        n_s += static_cast<double>(docs[d][f]);
      }
    }
    for (std::size_t f = 0; f < features; ++f) {
      p[s][f] = (n_fs[f] + alpha) / (n_s + alpha * static_cast<double>(features));
    }
  }
  return p;
}

// Multinomial likelihood with its coefficient N_D! / prod N_f!, normalized
// over subjects.
inline std::vector<double> oracle_mnb_posterior(const std::vector<std::vector<double>>& p, const DenseDoc& doc) {
  std::uint64_t total = 0;
  double denom = 1.0;
  for (auto c : doc) {
    total += c;
    denom *= factorial(c);
  }
  const double coefficient = factorial(total) / denom;
  std::vector<double> like(p.size());
  double sum = 0.0;
  for (std::size_t s = 0; s < p.size(); ++s) {
    double l = coefficient;
    for (std::size_t f = 0; f < doc.size(); ++f) l *= std::pow(p[s][f], static_cast<double>(doc[f]));
    like[s] = l;
    sum += l;
  }
  for (auto& v : like) v /= sum;
  return like;
}

// Independent Poisson counts per feature: prod lambda^N e^-lambda / N!.
inline std::vector<double> oracle_pnb_posterior(const std::vector<std::vector<double>>& lambda, const DenseDoc& doc) {
  std::vector<double> like(lambda.size());
  double sum = 0.0;
  for (std::size_t s = 0; s < lambda.size(); ++s) {
    double l = 1.0;
    for (std::size_t f = 0; f < doc.size(); ++f) {
      const double n = static_cast<double>(doc[f]);
      l *= std::pow(lambda[s][f], n) * std::exp(-lambda[s][f]) / factorial(doc[f]);
    }
    like[s] = l;
    sum += l;
  }
  for (auto& v : like) v /= sum;
  return like;
}

// pi_j = sum_a min(p_a, p_j), evaluated as the double loop.
inline std::vector<double> oracle_possibility(const std::vector<double>& p) {
  std::vector<double> pi(p.size(), 0.0);
  for (std::size_t j = 0; j < p.size(); ++j) {
    for (std::size_t a = 0; a < p.size(); ++a) pi[j] += std::min(p[a], p[j]);
  }
  return pi;
}

// Indices attaining the maximum within `slack` of it.
inline std::vector<std::size_t> near_argmax(const std::vector<double>& v, double slack) {
  const double top = *std::max_element(v.begin(), v.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] >= top - slack) out.push_back(i);
  }
  return out;
}

}  // namespace fda::testing
