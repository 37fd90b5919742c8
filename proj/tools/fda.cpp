// Command-line front end: train, attribute, sigscore, chimeric, eval, bench.
//
// Exit codes: 0 success, 1 data error, 2 configuration or usage error.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fda/config.hpp"
#include "fda/error.hpp"
#include "fda/pipeline.hpp"

namespace {

constexpr int kExitData = 1;
constexpr int kExitConfig = 2;

struct CommonOptions {
  std::string config_file;
  std::vector<std::string> overrides;
  std::string output;
  std::string corpus;

  void attach(CLI::App* cmd) {
    cmd->add_option("-c,--config", config_file, "Experiment config file (key = value lines)");
    cmd->add_option("-s,--set", overrides, "Override a config key, e.g. --set alpha=0")->type_name("KEY=VALUE");
    cmd->add_option("-o,--output", output, "Output directory (same as --set output=DIR)");
    cmd->add_option("--corpus", corpus, "Text corpus directory (same as --set corpus=DIR)");
  }

  fda::ExperimentConfig load() const {
    auto all = overrides;
    if (!corpus.empty()) all.insert(all.begin(), "corpus=" + corpus);
    if (!output.empty()) all.push_back("output=" + output);
    return fda::load_config(config_file, all);
  }
};

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> sizes;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    const auto part = text.substr(start, comma - start);
    try {
      std::size_t used = 0;
      sizes.push_back(std::stoull(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw fda::ConfigError("--sizes: '" + part + "' is not a positive integer");
    }
    start = comma + 1;
  }
  return sizes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bimodal forensic document analysis: stylome + signature fusion"};
  app.require_subcommand(1);

  CommonOptions common;
  auto* train = app.add_subcommand("train", "Train a stylome model on a per-subject text corpus");
  auto* attribute = app.add_subcommand("attribute", "Attribute a document or directory with a trained model");
  auto* sigscore = app.add_subcommand("sigscore", "Baseline fuzzy signature scores for the chimeric split");
  auto* chimeric = app.add_subcommand("chimeric", "Build the chimeric text+signature dataset manifest");
  auto* eval = app.add_subcommand("eval", "Run the configured protocol and write all metric bundles");
  auto* bench = app.add_subcommand("bench", "Measure run time scaling on synthetic corpora");
  for (auto* cmd : {train, attribute, sigscore, chimeric, eval, bench}) common.attach(cmd);

  std::string input;
  std::string model;
  attribute->add_option("-i,--input", input, "A .txt file or a per-subject directory")->required();
  attribute->add_option("-m,--model", model, "Model file (same as --set model=FILE)");

  std::string sizes = "2000,4000,8000";
  fda::BenchOptions bench_opts;
  std::string bench_features = bench_opts.features.to_string();
  bench->add_option("--sizes", sizes, "Comma-separated corpus sizes in documents")->capture_default_str();
  bench->add_option("--repeats", bench_opts.repeats, "Timed repeats per size")->capture_default_str();
  bench->add_option("--subjects", bench_opts.subjects, "Synthetic subjects")->capture_default_str();
  bench->add_option("--tokens", bench_opts.tokens_per_doc, "Tokens per synthetic document")->capture_default_str();
  bench->add_option("--profile-size", bench_opts.profile_size, "Vocabulary size")->capture_default_str();
  bench->add_option("--features", bench_features, "Feature model")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    auto config = common.load();
    if (!model.empty()) config.model = model;
    nlohmann::json result;
    if (*train) {
      result = fda::cmd_train(config);
    } else if (*attribute) {
      result = fda::cmd_attribute(config, input, std::cout);
    } else if (*sigscore) {
      result = fda::cmd_sigscore(config);
    } else if (*chimeric) {
      result = fda::cmd_chimeric(config);
    } else if (*eval) {
      result = fda::cmd_eval(config);
    } else if (*bench) {
      bench_opts.sizes = parse_sizes(sizes);
      bench_opts.features = fda::FeatureModel::parse(bench_features);
      result = fda::cmd_bench(bench_opts).to_json();
    }
    std::cout << result.dump(2) << '\n';
  } catch (const fda::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
