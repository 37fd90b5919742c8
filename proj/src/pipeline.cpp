#include "fda/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "fda/error.hpp"
#include "fda/fusion.hpp"
#include "fda/metrics.hpp"
#include "fda/parallel.hpp"
#include "fda/possibility.hpp"
#include "fda/synthetic.hpp"
#include "fda/text.hpp"

namespace fda {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

void write_json(const fs::path& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

std::string_view ci_name(CiMethod m) {
  return m == CiMethod::student_t_over_folds ? "student_t_over_folds" : "wald_over_items";
}

json accuracy_json(const AccuracyReport& r) {
  return json{{"accuracy", r.accuracy},     {"ci_low", r.ci_low},         {"ci_high", r.ci_high},
              {"n", r.n},                   {"ci_method", ci_name(r.method)}, {"ci_degenerate", r.degenerate}};
}

ScoreMatrix concat_rows(const std::vector<ScoreMatrix>& parts) {
  std::vector<std::string> items;
  std::vector<double> values;
  for (const auto& m : parts) {
    items.insert(items.end(), m.items().begin(), m.items().end());
    values.insert(values.end(), m.values().begin(), m.values().end());
  }
  return ScoreMatrix(parts.front().subjects(), std::move(items), std::move(values));
}

ScoreMatrix rename_items(const ScoreMatrix& m, const std::string& prefix) {
  std::vector<std::string> items;
  for (const auto& i : m.items()) items.push_back(prefix + i);
  return ScoreMatrix(m.subjects(), std::move(items), m.values());
}

ScoreMatrix possibility_rows(const ScoreMatrix& m) {
  std::vector<double> values;
  values.reserve(m.values().size());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::vector<double> pi;
    try {
      pi = to_possibility(m.row(r));
    } catch (const std::invalid_argument& e) {
      throw DataError("external score row '" + m.items()[r] + "' is not a probability distribution: " + e.what());
    }
    values.insert(values.end(), pi.begin(), pi.end());
  }
  return ScoreMatrix(m.subjects(), m.items(), std::move(values));
}

void require_shape(const ScoreMatrix& m, std::size_t rows, std::size_t cols, std::string_view what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw DataError(std::string(what) + " is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                    ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
  }
}

json ttest_json(std::string_view a, std::string_view b, const std::vector<int>& ca, const std::vector<int>& cb) {
  const auto r = paired_ttest(ca, cb);
  return json{{"a", a}, {"b", b}, {"t", std::isfinite(r.t) ? json(r.t) : json(r.t > 0 ? "inf" : "-inf")},
              {"df", r.df}, {"p_value", r.p_value}, {"degenerate", r.degenerate}};
}

std::vector<std::string> subject_labels(const std::vector<Subject>& subjects) {
  std::vector<std::string> out;
  for (const auto& s : subjects) out.push_back(s.label);
  return out;
}

template <typename Fn>
auto stage(std::string_view name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const DataError& e) {
    throw DataError("stage '" + std::string(name) + "': " + e.what());
  }
}

}  // namespace

std::vector<FeatureCounts> extract_all(std::span<const Document* const> docs, const FeatureModel& model,
                                       unsigned threads) {
  std::vector<FeatureCounts> out(docs.size());
  parallel_for(docs.size(), threads, [&](std::size_t i) {
    try {
      out[i] = extract_features(docs[i]->text, docs[i]->tree, model);
    } catch (const std::exception& e) {
      throw DataError("document '" + docs[i]->doc_id + "': " + e.what());
    }
  });
  return out;
}

Classifier train_classifier(std::span<const FeatureCounts> train, std::span<const SubjectId> labels,
                            std::vector<Subject> subjects, const ExperimentConfig& config) {
  if (train.size() != labels.size()) throw std::invalid_argument("training features and labels differ in length");
  Vocabulary vocab = build_vocabulary(train, config.profile_size, config.features);
  std::vector<LabeledVector> vectors;
  vectors.reserve(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) vectors.push_back({vectorize(train[i], vocab), labels[i]});
  if (config.classifier == ClassifierKind::pnb) {
    return pnb_train(vectors, std::move(vocab), config.alpha, std::move(subjects));
  }
  return mnb_train(vectors, std::move(vocab), config.alpha, std::move(subjects));
}

StylomeScores score_stylome(const Classifier& model, std::span<const FeatureCounts> test,
                            std::span<const SubjectId> truth, std::vector<std::string> item_ids) {
  if (test.size() != truth.size() || test.size() != item_ids.size()) {
    throw std::invalid_argument("test features, truth and item ids differ in length");
  }
  StylomeScores out;
  const auto& vocab = vocabulary(model);
  std::vector<double> values;
  values.reserve(test.size() * subjects(model).size());
  for (const auto& doc : test) {
    const Posterior p = posterior(model, vectorize(doc, vocab));
    out.degenerate_docs += p.degenerate;
    const auto pi = to_possibility(p.probabilities);
    values.insert(values.end(), pi.begin(), pi.end());
  }
  out.possibility = ScoreMatrix(subject_labels(subjects(model)), std::move(item_ids), std::move(values));
  out.truth.assign(truth.begin(), truth.end());
  return out;
}

json write_bundle(const fs::path& dir, const ScoreMatrix& scores, std::span<const SubjectId> truth,
                  const ExperimentConfig& config, std::vector<int>* correct) {
  if (scores.rows() == 0) throw DataError("empty test split: nothing to evaluate");
  fs::create_directories(dir);
  {
    auto out = open_out(dir / "scores.csv");
    write_score_matrix(out, scores);
  }

  std::vector<std::pair<SubjectId, SubjectId>> decisions;
  std::size_t ties = 0;
  {
    auto out = open_out(dir / "decisions.csv");
    out << "item_id,predicted,true,correct,tie\n";
    for (std::size_t r = 0; r < scores.rows(); ++r) {
      const Decision d = decide(scores.row(r));
      decisions.emplace_back(d.subject, truth[r]);
      ties += d.tie;
      const int ok = d.subject == truth[r];
      if (correct) correct->push_back(ok);
      out << scores.items()[r] << ',' << scores.subjects()[d.subject] << ',' << scores.subjects()[truth[r]] << ','
          << ok << ',' << int(d.tie) << '\n';
    }
  }

  const AccuracyReport acc = accuracy(decisions);
  const ClaimSet claims = expand_claims(scores, truth);
  const auto grid = threshold_grid(config.grid_steps);
  const Curve f = fscore_curve(claims, grid);
  const Curve recall = recall_curve(claims, grid);
  const Curve det = det_curve(claims, grid);
  const Curve cmc = cmc_curve(scores, truth);
  const ScoreHistogram hist = msh(claims, config.msh_bins);

  auto write_curve = [&](const char* name, const Curve& c) {
    auto out = open_out(dir / name);
    write_curve_csv(out, c);
  };
  write_curve("fscore.csv", f);
  write_curve("recall.csv", recall);
  write_curve("det.csv", det);
  write_curve("cmc.csv", cmc);
  {
    auto out = open_out(dir / "msh.csv");
    write_histogram_csv(out, hist);
  }

  const auto best = std::max_element(f.points.begin(), f.points.end(),
                                     [](const CurvePoint& a, const CurvePoint& b) { return a.y < b.y; });
  json summary = accuracy_json(acc);
  summary["items"] = scores.rows();
  summary["subjects"] = scores.cols();
  summary["ties"] = ties;
  summary["claims"] = claims.claims.size();
  summary["genuine_claims"] = claims.genuine_count;
  summary["imposter_claims"] = claims.imposter_count;
  summary["best_fscore"] = best->y;
  summary["best_fscore_threshold"] = best->parameter;
  summary["det_area"] = det.area;
  summary["cmc_rank1"] = cmc.points.front().y;
  summary["msh_overlap"] = hist.overlap;
  write_json(dir / "summary.json", summary);
  return summary;
}

ScoreMatrix baseline_signature_matrix(const std::vector<std::vector<SignatureSample>>& templates,
                                      std::span<const SignatureSample> probes, std::vector<std::string> subjects,
                                      std::vector<std::string> items, double delta_alpha, unsigned threads,
                                      std::size_t* degenerate) {
  const std::size_t S = templates.size();
  std::vector<std::vector<DirectionHistogram>> hist(S);
  for (std::size_t j = 0; j < S; ++j) {
    for (const auto& t : templates[j]) hist[j].push_back(DirectionHistogram::from_sample(t, delta_alpha));
  }
  std::vector<double> values(probes.size() * S);
  std::vector<unsigned char> flagged(probes.size(), 0);
  parallel_for(probes.size(), threads, [&](std::size_t i) {
    const auto probe = DirectionHistogram::from_sample(probes[i], delta_alpha);
    for (std::size_t j = 0; j < S; ++j) {
      const auto score = baseline_score(hist[j], probe);
      values[i * S + j] = score.value;
      flagged[i] = score.degenerate;
    }
  });
  if (degenerate) *degenerate = static_cast<std::size_t>(std::count(flagged.begin(), flagged.end(), 1));
  return ScoreMatrix(std::move(subjects), std::move(items), std::move(values));
}

Corpus load_configured_corpus(const fs::path& root, const ExperimentConfig& config) {
  Corpus c = load_text_corpus(root, config.threads);
  if (config.keep_largest > 0) c = keep_largest(c, config.keep_largest);
  if (c.subjects.empty()) throw DataError("no subject in " + root.string() + " has enough documents");
  return c;
}

// ---------------------------------------------------------------------------

json cmd_train(const ExperimentConfig& config) {
  require_valid(config, Command::train);
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const Corpus corpus = stage("load", [&] { return load_configured_corpus(config.corpus, config); });
  const auto t1 = clock::now();

  std::vector<const Document*> docs;
  std::vector<SubjectId> labels;
  for (const auto& d : corpus.documents) {
    docs.push_back(&d);
    labels.push_back(d.subject);
  }
  const auto feats = stage("features", [&] { return extract_all(docs, config.features, config.threads); });
  const auto t2 = clock::now();
  const Classifier model =
      stage("train", [&] { return train_classifier(feats, labels, corpus.subjects, config); });
  const auto t3 = clock::now();

  {
    auto out = open_out(config.model_path());
    save_model(out, model);
  }
  {
    auto out = open_out(config.output / "vocabulary.tsv");
    write_feature_tsv(out, vocabulary(model));
  }
  auto secs = [](auto a, auto b) { return std::chrono::duration<double>(b - a).count(); };
  json log{{"classifier", to_string(config.classifier)},
           {"alpha", config.alpha},
           {"features", config.features.to_string()},
           {"profile_size", config.profile_size},
           {"subjects", corpus.subjects.size()},
           {"documents", corpus.documents.size()},
           {"vocabulary_size", vocabulary(model).size()},
           {"model", config.model_path().string()},
           {"seconds", {{"load", secs(t0, t1)}, {"features", secs(t1, t2)}, {"train", secs(t2, t3)}}}};
  write_json(config.output / "train_log.json", log);
  return log;
}

json cmd_attribute(const ExperimentConfig& config, const fs::path& input, std::ostream& out) {
  require_valid(config, Command::attribute);
  const Classifier model = stage("load-model", [&] {
    std::ifstream in(config.model_path(), std::ios::binary);
    if (!in) throw DataError("cannot open model " + config.model_path().string());
    return load_model(in);
  });

  std::vector<Document> docs;
  if (fs::is_directory(input)) {
    docs = stage("load", [&] { return load_text_corpus(input, config.threads).documents; });
  } else {
    Document d;
    d.doc_id = input.filename().string();
    std::ifstream in(input, std::ios::binary);
    if (!in) throw DataError("cannot open " + input.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    d.text = ss.str();
    if (!is_valid_utf8(d.text)) throw DataError("file is not valid UTF-8: " + input.string());
    auto sidecar = input;
    sidecar.replace_extension(".conllu");
    if (fs::exists(sidecar)) {
      std::ifstream cin(sidecar, std::ios::binary);
      std::ostringstream cs;
      cs << cin.rdbuf();
      d.tree = parse_conllu(cs.str(), sidecar.string());
    }
    docs.push_back(std::move(d));
  }

  std::vector<const Document*> ptrs;
  std::vector<std::string> ids;
  for (const auto& d : docs) {
    ptrs.push_back(&d);
    ids.push_back(d.doc_id);
  }
  const auto feats = stage("features", [&] { return extract_all(ptrs, vocabulary(model).model(), config.threads); });
  std::vector<SubjectId> dummy(feats.size(), 0);
  const auto scores = score_stylome(model, feats, dummy, ids);

  json result = json::array();
  for (std::size_t r = 0; r < scores.possibility.rows(); ++r) {
    const Decision d = decide(scores.possibility.row(r));
    const auto& label = scores.possibility.subjects()[d.subject];
    out << ids[r] << '\t' << label << (d.tie ? "\t(tie)" : "") << '\n';
    result.push_back({{"doc_id", ids[r]}, {"predicted", label}, {"tie", d.tie}});
  }
  auto csv = open_out(config.output / "attribution_scores.csv");
  write_score_matrix(csv, scores.possibility);
  return result;
}

json cmd_sigscore(const ExperimentConfig& config) {
  require_valid(config, Command::sigscore);
  const SignatureCorpus sigs = stage("load", [&] { return load_svc(config.signatures); });
  const std::size_t need = config.chimeric_train + config.chimeric_test;
  std::vector<std::vector<SignatureSample>> templates;
  std::vector<SignatureSample> probes;
  std::vector<std::string> items;
  std::vector<SubjectId> truth;
  for (std::size_t w = 0; w < sigs.writers.size(); ++w) {
    const auto& group = sigs.samples[w];
    if (group.size() < need) {
      throw DataError("writer '" + sigs.writers[w].label + "' has " + std::to_string(group.size()) +
                      " genuine signatures, needs " + std::to_string(need));
    }
    templates.emplace_back(group.begin(), group.begin() + static_cast<std::ptrdiff_t>(config.chimeric_train));
    for (std::size_t i = config.chimeric_train; i < need; ++i) {
      probes.push_back(group[i]);
      items.push_back(sigs.writers[w].label + "S" + std::to_string(group[i].index));
      truth.push_back(static_cast<SubjectId>(w));
    }
  }
  std::size_t degenerate = 0;
  const auto matrix = baseline_signature_matrix(templates, probes, subject_labels(sigs.writers), items,
                                                config.delta_alpha, config.threads, &degenerate);
  {
    auto out = open_out(config.output / "signature_scores.csv");
    write_score_matrix(out, matrix);
  }
  {
    auto out = open_out(config.output / "signature_truth.csv");
    out << "item_id,writer\n";
    for (std::size_t i = 0; i < items.size(); ++i) out << items[i] << ',' << sigs.writers[truth[i]].label << '\n';
  }
  return json{{"writers", sigs.writers.size()},
              {"probes", probes.size()},
              {"delta_alpha", config.delta_alpha},
              {"degenerate_probes", degenerate}};
}

namespace {

ChimericDataset load_chimeric(const ExperimentConfig& config) {
  const Corpus text = stage("load", [&] { return load_configured_corpus(config.corpus, config); });
  const SignatureCorpus sigs = stage("load", [&] { return load_svc(config.signatures); });
  return stage("chimeric", [&] {
    if (!config.test_corpus.empty()) {
      const Corpus test = load_configured_corpus(config.test_corpus, config);
      return build_chimeric(text, test, sigs, config.chimeric_train, config.chimeric_test);
    }
    return build_chimeric(text, sigs, config.chimeric_train, config.chimeric_test);
  });
}

json chimeric_counts(const ChimericDataset& data) {
  const std::size_t S = data.subjects.size();
  const std::size_t T = data.test.size();
  return json{{"subjects", S},      {"train_items", data.train.size()}, {"test_items", T},
              {"claims", T * S},    {"genuine_claims", T},              {"imposter_claims", T * S - T}};
}

json eval_chimeric(const ExperimentConfig& config) {
  require_valid(config, Command::chimeric);
  const ChimericDataset data = load_chimeric(config);
  const auto labels = subject_labels(data.subjects);

  std::vector<const Document*> train_docs, test_docs;
  std::vector<SubjectId> train_labels, truth;
  std::vector<std::string> items;
  for (const auto& it : data.train) {
    train_docs.push_back(&it.document);
    train_labels.push_back(it.subject);
  }
  for (const auto& it : data.test) {
    test_docs.push_back(&it.document);
    truth.push_back(it.subject);
    items.push_back(it.item_id);
  }

  const auto train_feats = stage("features", [&] { return extract_all(train_docs, config.features, config.threads); });
  const auto test_feats = stage("features", [&] { return extract_all(test_docs, config.features, config.threads); });
  const Classifier model =
      stage("train", [&] { return train_classifier(train_feats, train_labels, data.subjects, config); });
  const StylomeScores stylome = stage("score", [&] { return score_stylome(model, test_feats, truth, items); });

  std::size_t degenerate_probes = 0;
  const ScoreMatrix signature = stage("signature", [&] {
    if (config.signature_source == SignatureSource::matrix) {
      auto m = load_score_matrix(config.signature_matrix);
      require_shape(m, items.size(), labels.size(), "signature score matrix");
      return ScoreMatrix(labels, items, m.values());
    }
    std::vector<std::vector<SignatureSample>> templates(data.subjects.size());
    for (const auto& it : data.train) templates[it.subject].push_back(it.signature);
    std::vector<SignatureSample> probes;
    for (const auto& it : data.test) probes.push_back(it.signature);
    return baseline_signature_matrix(templates, probes, labels, items, config.delta_alpha, config.threads,
                                     &degenerate_probes);
  });

  const std::string sty = std::string(to_string(config.classifier));
  std::map<std::string, std::vector<int>> correct;
  json bundles;
  auto bundle = [&](const std::string& name, const ScoreMatrix& m) {
    bundles[name] = stage("metrics", [&] { return write_bundle(config.output / name, m, truth, config, &correct[name]); });
  };
  bundle(sty, stylome.possibility);
  bundle("signature", signature);
  bundle(sty + "+signature", fuse(stylome.possibility, signature, config.fusion));

  json tests = json::array();
  tests.push_back(ttest_json(sty + "+signature", "signature", correct[sty + "+signature"], correct["signature"]));
  tests.push_back(ttest_json(sty + "+signature", sty, correct[sty + "+signature"], correct[sty]));

  if (!config.external_matrix.empty()) {
    const std::string ext = config.external_name;
    ScoreMatrix external = stage("external", [&] {
      auto m = load_score_matrix(config.external_matrix);
      require_shape(m, items.size(), labels.size(), "external score matrix");
      m = ScoreMatrix(labels, items, m.values());
      return config.external_is_probability ? possibility_rows(m) : m;
    });
    bundle(ext, external);
    bundle(ext + "+signature", fuse(external, signature, config.fusion));
    tests.push_back(ttest_json(ext + "+signature", "signature", correct[ext + "+signature"], correct["signature"]));
    tests.push_back(
        ttest_json(sty + "+signature", ext + "+signature", correct[sty + "+signature"], correct[ext + "+signature"]));
  }

  json summary = chimeric_counts(data);
  summary["protocol"] = "chimeric";
  summary["classifier"] = sty;
  summary["features"] = config.features.to_string();
  summary["fusion"] = to_string(config.fusion);
  summary["delta_alpha"] = config.delta_alpha;
  summary["degenerate_stylome_items"] = stylome.degenerate_docs;
  summary["degenerate_signature_probes"] = degenerate_probes;
  summary["bundles"] = bundles;
  summary["ttests"] = tests;
  return summary;
}

json eval_rolling(const ExperimentConfig& config) {
  const Corpus corpus = stage("load", [&] { return load_configured_corpus(config.corpus, config); });
  const SplitPlan plan = stage("folds", [&] { return rolling_folds(corpus, config.train_window, config.test_window); });

  std::vector<const Document*> all;
  for (const auto& d : corpus.documents) all.push_back(&d);
  const auto feats = stage("features", [&] { return extract_all(all, config.features, config.threads); });

  std::vector<ScoreMatrix> parts;
  std::vector<SubjectId> pooled_truth;
  std::vector<double> fold_acc;
  json folds = json::array();
  auto folds_csv = open_out(config.output / "folds.csv");
  folds_csv << "fold,accuracy,test_items\n";
  for (const auto& fold : plan.folds) {
    std::vector<FeatureCounts> train, test;
    std::vector<SubjectId> train_labels, truth;
    std::vector<std::string> items;
    for (auto i : fold.train) {
      train.push_back(feats[i]);
      train_labels.push_back(corpus.documents[i].subject);
    }
    for (auto i : fold.test) {
      test.push_back(feats[i]);
      truth.push_back(corpus.documents[i].subject);
      items.push_back(corpus.documents[i].doc_id);
    }
    if (test.empty()) throw DataError("empty test split in fold " + std::to_string(fold.index));
    const auto model = stage("train", [&] { return train_classifier(train, train_labels, corpus.subjects, config); });
    const auto scores = score_stylome(model, test, truth, items);
    std::size_t ok = 0;
    for (std::size_t r = 0; r < truth.size(); ++r) ok += decide(scores.possibility.row(r)).subject == truth[r];
    const double acc = static_cast<double>(ok) / static_cast<double>(truth.size());
    fold_acc.push_back(acc);
    folds_csv << fold.index << ',' << format_real(acc) << ',' << truth.size() << '\n';
    folds.push_back({{"fold", fold.index}, {"accuracy", acc}, {"test_items", truth.size()}});
    parts.push_back(rename_items(scores.possibility, "fold" + std::to_string(fold.index) + ":"));
    pooled_truth.insert(pooled_truth.end(), truth.begin(), truth.end());
  }

  const std::string sty = std::string(to_string(config.classifier));
  json summary;
  summary["protocol"] = "rolling";
  summary["classifier"] = sty;
  summary["features"] = config.features.to_string();
  summary["subjects"] = corpus.subjects.size();
  summary["train_window"] = config.train_window;
  summary["test_window"] = config.test_window;
  summary["folds"] = folds;
  summary["aggregate"] = accuracy_json(accuracy_over_folds(fold_acc));
  summary["bundles"][sty] =
      stage("metrics", [&] { return write_bundle(config.output / sty, concat_rows(parts), pooled_truth, config); });
  return summary;
}

json eval_holdout(const ExperimentConfig& config) {
  const Corpus train = stage("load", [&] { return load_configured_corpus(config.corpus, config); });
  const Corpus test = stage("load", [&] { return load_text_corpus(config.test_corpus, config.threads); });
  std::map<std::string, SubjectId> by_label;
  for (const auto& s : train.subjects) by_label[s.label] = s.id;

  std::vector<const Document*> train_docs, test_docs;
  std::vector<SubjectId> train_labels, truth;
  std::vector<std::string> items;
  for (const auto& d : train.documents) {
    train_docs.push_back(&d);
    train_labels.push_back(d.subject);
  }
  for (const auto& d : test.documents) {
    const auto it = by_label.find(test.subjects[d.subject].label);
    if (it == by_label.end()) {
      throw DataError("test subject '" + test.subjects[d.subject].label + "' does not occur in the training corpus");
    }
    test_docs.push_back(&d);
    truth.push_back(it->second);
    items.push_back(d.doc_id);
  }
  const auto train_feats = stage("features", [&] { return extract_all(train_docs, config.features, config.threads); });
  const auto test_feats = stage("features", [&] { return extract_all(test_docs, config.features, config.threads); });
  const auto model = stage("train", [&] { return train_classifier(train_feats, train_labels, train.subjects, config); });
  const auto scores = score_stylome(model, test_feats, truth, items);

  const std::string sty = std::string(to_string(config.classifier));
  json summary;
  summary["protocol"] = "holdout";
  summary["classifier"] = sty;
  summary["features"] = config.features.to_string();
  summary["subjects"] = train.subjects.size();
  summary["train_items"] = train_docs.size();
  summary["test_items"] = test_docs.size();
  summary["degenerate_stylome_items"] = scores.degenerate_docs;
  summary["bundles"][sty] =
      stage("metrics", [&] { return write_bundle(config.output / sty, scores.possibility, truth, config); });
  return summary;
}

}  // namespace

json cmd_chimeric(const ExperimentConfig& config) {
  require_valid(config, Command::chimeric);
  const ChimericDataset data = load_chimeric(config);
  auto out = open_out(config.output / "chimeric_manifest.csv");
  out << "split,item_id,subject,document,signature\n";
  auto row = [&](std::string_view split, const ChimericItem& it) {
    out << split << ',' << it.item_id << ',' << data.subjects[it.subject].label << ',' << it.document.doc_id << ','
        << fs::path(it.signature.source).filename().string() << '\n';
  };
  for (const auto& it : data.train) row("train", it);
  for (const auto& it : data.test) row("test", it);
  return chimeric_counts(data);
}

json cmd_eval(const ExperimentConfig& config) {
  require_valid(config, Command::eval);
  json summary;
  switch (config.protocol) {
    case Protocol::rolling: summary = eval_rolling(config); break;
    case Protocol::chimeric: summary = eval_chimeric(config); break;
    case Protocol::holdout: summary = eval_holdout(config); break;
  }
  write_json(config.output / "summary.json", summary);
  return summary;
}

json BenchReport::to_json() const {
  json points = json::array();
  for (std::size_t i = 0; i < sizes.size(); ++i) points.push_back({{"documents", sizes[i]}, {"seconds", seconds[i]}});
  return json{{"points", points}, {"doubling_ratios", doubling_ratios}, {"loglog_slope", slope}};
}

BenchReport cmd_bench(const BenchOptions& options) {
  if (options.sizes.size() < 2) throw ConfigError("bench needs at least two corpus sizes");
  if (options.repeats < 1) throw ConfigError("bench needs at least one repeat");
  if (options.subjects < 1) throw ConfigError("bench needs at least one subject");
  for (std::size_t i = 0; i < options.sizes.size(); ++i) {
    if (options.sizes[i] < 2 * options.subjects) {
      throw ConfigError("bench size " + std::to_string(options.sizes[i]) + " gives fewer than 2 documents per subject");
    }
    if (i && options.sizes[i] <= options.sizes[i - 1]) throw ConfigError("bench sizes must be strictly increasing");
  }

  ExperimentConfig config;
  config.features = options.features;
  config.profile_size = options.profile_size;
  config.alpha = options.alpha;

  BenchReport report;
  for (std::size_t size : options.sizes) {
    const Corpus corpus = make_synthetic_corpus(
        {options.subjects, size / options.subjects, options.tokens_per_doc, SyntheticCorpusSpec{}.vocabulary});
    std::vector<const Document*> train_docs, test_docs;
    std::vector<SubjectId> train_labels, truth;
    std::vector<std::string> items;
    for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
      const auto& d = corpus.documents[i];
      if (i % 2 == 0) {
        train_docs.push_back(&d);
        train_labels.push_back(d.subject);
      } else {
        test_docs.push_back(&d);
        truth.push_back(d.subject);
        items.push_back(d.doc_id);
      }
    }
    double total = 0.0;
    for (std::size_t rep = 0; rep < options.repeats; ++rep) {
      const auto start = std::chrono::steady_clock::now();
      const auto train = extract_all(train_docs, config.features, 1);
      const auto test = extract_all(test_docs, config.features, 1);
      const auto model = train_classifier(train, train_labels, corpus.subjects, config);
      const auto scores = score_stylome(model, test, truth, items);
      total += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (scores.possibility.rows() != test_docs.size()) throw DataError("bench scoring lost items");
    }
    report.sizes.push_back(size);
    report.seconds.push_back(total / static_cast<double>(options.repeats));
  }

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < report.sizes.size(); ++i) {
    lx.push_back(std::log(static_cast<double>(report.sizes[i])));
    ly.push_back(std::log(report.seconds[i]));
    if (i) {
      // Growth normalized to one doubling of the corpus size.
      const double size_doublings = (lx[i] - lx[i - 1]) / std::log(2.0);
      report.doubling_ratios.push_back(std::pow(report.seconds[i] / report.seconds[i - 1], 1.0 / size_doublings));
    }
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(lx.size());
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(ly.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  report.slope = sxy / sxx;
  return report;
}

}  // namespace fda
