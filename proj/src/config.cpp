#include "fda/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fda/error.hpp"
#include "fda/text.hpp"

namespace fda {
namespace {

namespace fs = std::filesystem;

template <typename Int>
std::string parse_count(std::string_view key, std::string_view value, Int& out, Int min_value) {
  Int v{};
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (value.empty() || ec != std::errc{} || ptr != end) {
    return std::string(key) + ": expected an integer, got '" + std::string(value) + "'";
  }
  if (v < min_value) return std::string(key) + ": must be >= " + std::to_string(min_value);
  out = v;
  return {};
}

std::string parse_bool(std::string_view key, std::string_view value, bool& out) {
  if (value == "true" || value == "1" || value == "yes") {
    out = true;
  } else if (value == "false" || value == "0" || value == "no") {
    out = false;
  } else {
    return std::string(key) + ": expected true/false, got '" + std::string(value) + "'";
  }
  return {};
}

std::string join(const std::vector<std::string>& errors) {
  std::string out = "invalid configuration:";
  for (const auto& e : errors) out += "\n  - " + e;
  return out;
}

}  // namespace

std::string_view to_string(ClassifierKind kind) { return kind == ClassifierKind::mnb ? "mnb" : "pnb"; }

std::string_view to_string(Protocol protocol) {
  switch (protocol) {
    case Protocol::rolling: return "rolling";
    case Protocol::chimeric: return "chimeric";
    case Protocol::holdout: return "holdout";
  }
  return "rolling";
}

const std::vector<std::string_view>& config_keys() {
  static const std::vector<std::string_view> keys{
      "corpus",          "test_corpus",     "signatures",       "signature_source", "signature_matrix",
      "external_matrix", "external_name",   "external_is_probability",
      "features",        "profile_size",    "classifier",       "alpha",
      "protocol",        "train_window",    "test_window",      "keep_largest",     "chimeric_train",
      "chimeric_test",   "delta_alpha",     "fusion",           "msh_bins",         "grid_steps",
      "output",          "model",           "threads",          "seed"};
  return keys;
}

std::string ExperimentConfig::set(std::string_view key, std::string_view value) {
  try {
    if (key == "corpus") {
      corpus = std::string(value);
    } else if (key == "test_corpus") {
      test_corpus = std::string(value);
    } else if (key == "signatures") {
      signatures = std::string(value);
    } else if (key == "signature_source") {
      if (value == "baseline") {
        signature_source = SignatureSource::baseline;
      } else if (value == "matrix") {
        signature_source = SignatureSource::matrix;
      } else {
        return "signature_source: expected baseline or matrix";
      }
    } else if (key == "signature_matrix") {
      signature_matrix = std::string(value);
    } else if (key == "external_matrix") {
      external_matrix = std::string(value);
    } else if (key == "external_name") {
      if (value.empty() || value.find_first_of("/\\") != std::string_view::npos) {
        return "external_name: must be a plain non-empty name";
      }
      external_name = std::string(value);
    } else if (key == "external_is_probability") {
      return parse_bool(key, value, external_is_probability);
    } else if (key == "features") {
      features = FeatureModel::parse(value);
    } else if (key == "profile_size") {
      return parse_count<std::size_t>(key, value, profile_size, 1);
    } else if (key == "classifier") {
      if (value == "mnb") {
        classifier = ClassifierKind::mnb;
      } else if (value == "pnb") {
        classifier = ClassifierKind::pnb;
      } else {
        return "classifier: expected mnb or pnb";
      }
    } else if (key == "alpha") {
      const auto v = parse_real(value);
      if (!v || !(*v >= 0.0)) return "alpha: expected a real number >= 0, got '" + std::string(value) + "'";
      alpha = *v;
    } else if (key == "protocol") {
      if (value == "rolling") {
        protocol = Protocol::rolling;
      } else if (value == "chimeric") {
        protocol = Protocol::chimeric;
      } else if (value == "holdout") {
        protocol = Protocol::holdout;
      } else {
        return "protocol: expected rolling, chimeric or holdout";
      }
    } else if (key == "train_window") {
      return parse_count<std::size_t>(key, value, train_window, 1);
    } else if (key == "test_window") {
      return parse_count<std::size_t>(key, value, test_window, 1);
    } else if (key == "keep_largest") {
      return parse_count<std::size_t>(key, value, keep_largest, 0);
    } else if (key == "chimeric_train") {
      return parse_count<std::size_t>(key, value, chimeric_train, 1);
    } else if (key == "chimeric_test") {
      return parse_count<std::size_t>(key, value, chimeric_test, 1);
    } else if (key == "delta_alpha") {
      const auto v = parse_real(value);
      if (!v || !(*v > 0.0 && *v <= 360.0)) return "delta_alpha: expected degrees in (0, 360]";
      delta_alpha = *v;
    } else if (key == "fusion") {
      fusion = parse_fusion_operator(value);
    } else if (key == "msh_bins") {
      return parse_count<std::size_t>(key, value, msh_bins, 1);
    } else if (key == "grid_steps") {
      return parse_count<std::size_t>(key, value, grid_steps, 1);
    } else if (key == "output") {
      output = std::string(value);
    } else if (key == "model") {
      model = std::string(value);
    } else if (key == "threads") {
      return parse_count<unsigned>(key, value, threads, 1);
    } else if (key == "seed") {
      return parse_count<std::uint64_t>(key, value, seed, 0);
    } else {
      return "unknown key '" + std::string(key) + "'";
    }
  } catch (const ConfigError& e) {
    return std::string(key) + ": " + e.what();
  }
  return {};
}

std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view text,
                                                                   std::vector<std::string>& errors) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::size_t line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    const auto hash = raw.find('#');
    const auto line = trim(raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back("line " + std::to_string(line_no) + ": expected 'key = value'");
      continue;
    }
    pairs.emplace_back(std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))));
  }
  return pairs;
}

ExperimentConfig load_config(const fs::path& file, const std::vector<std::string>& overrides) {
  ExperimentConfig config;
  std::vector<std::string> errors;
  auto apply = [&](std::string_view origin, std::string_view key, std::string_view value) {
    if (auto err = config.set(key, value); !err.empty()) errors.push_back(std::string(origin) + ": " + err);
  };

  if (!file.empty()) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
      errors.push_back("cannot read config file " + file.string());
    } else {
      std::ostringstream ss;
      ss << in.rdbuf();
      std::vector<std::string> parse_errors;
      for (const auto& [k, v] : parse_config_text(ss.str(), parse_errors)) apply(file.string(), k, v);
      for (auto& e : parse_errors) errors.push_back(file.string() + ": " + e);
    }
  }
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) config.output = env;
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) {
      errors.push_back("--set " + o + ": expected key=value");
      continue;
    }
    apply("--set", trim(std::string_view(o).substr(0, eq)), trim(std::string_view(o).substr(eq + 1)));
  }
  if (!errors.empty()) throw ConfigError(join(errors));
  return config;
}

std::vector<std::string> validate(const ExperimentConfig& c, Command command) {
  std::vector<std::string> errors;
  auto need_dir = [&](std::string_view key, const fs::path& p) {
    if (p.empty()) {
      errors.push_back(std::string(key) + " is required");
    } else if (!fs::is_directory(p)) {
      errors.push_back(std::string(key) + ": directory not found: " + p.string());
    }
  };
  auto need_file = [&](std::string_view key, const fs::path& p) {
    if (p.empty()) {
      errors.push_back(std::string(key) + " is required");
    } else if (!fs::is_regular_file(p)) {
      errors.push_back(std::string(key) + ": file not found: " + p.string());
    }
  };

  switch (command) {
    case Command::train:
      need_dir("corpus", c.corpus);
      break;
    case Command::attribute:
      need_file("model", c.model_path());
      break;
    case Command::sigscore:
      need_dir("signatures", c.signatures);
      break;
    case Command::chimeric:
      need_dir("corpus", c.corpus);
      need_dir("signatures", c.signatures);
      if (!c.test_corpus.empty()) need_dir("test_corpus", c.test_corpus);
      break;
    case Command::eval:
      need_dir("corpus", c.corpus);
      if (c.protocol == Protocol::holdout) need_dir("test_corpus", c.test_corpus);
      if (c.protocol == Protocol::chimeric) {
        if (!c.test_corpus.empty()) need_dir("test_corpus", c.test_corpus);
        need_dir("signatures", c.signatures);
        if (c.signature_source == SignatureSource::matrix) need_file("signature_matrix", c.signature_matrix);
        if (!c.external_matrix.empty()) need_file("external_matrix", c.external_matrix);
      }
      break;
    case Command::bench:
      break;
  }
  return errors;
}

void require_valid(const ExperimentConfig& config, Command command) {
  const auto errors = validate(config, command);
  if (!errors.empty()) throw ConfigError(join(errors));
}

}  // namespace fda
