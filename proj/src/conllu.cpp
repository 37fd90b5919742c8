#include "fda/conllu.hpp"

#include <charconv>
#include <vector>

#include "fda/error.hpp"

namespace fda {
namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cols.push_back(line.substr(start));
      break;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return cols;
}

bool parse_int(std::string_view s, int& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

std::string where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line);
}

}  // namespace

void validate_tree(const DepSentence& sentence) {
  const int n = static_cast<int>(sentence.tokens.size());
  if (n == 0) throw DataError("dependency sentence has no tokens");
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    const int h = sentence.tokens[i].head;
    if (h == -1) {
      ++roots;
    } else if (h < 0 || h >= n || h == i) {
      throw DataError("token " + std::to_string(i) + " has invalid head " + std::to_string(h));
    }
  }
  if (roots != 1) throw DataError("dependency sentence has " + std::to_string(roots) + " roots, expected 1");
  if (sentence.root < 0 || sentence.root >= n || sentence.tokens[sentence.root].head != -1) {
    throw DataError("dependency sentence root index does not point at the root token");
  }
  // Every node must reach the root; colour nodes as we climb so the whole
  // check stays linear.
  enum : unsigned char { kUnseen, kOnPath, kDone };
  std::vector<unsigned char> state(n, kUnseen);
  std::vector<int> path;
  for (int start = 0; start < n; ++start) {
    int v = start;
    while (v != -1 && state[v] == kUnseen) {
      state[v] = kOnPath;
      path.push_back(v);
      v = sentence.tokens[v].head;
    }
    if (v != -1 && state[v] == kOnPath) throw DataError("dependency sentence contains a cycle");
    for (int u : path) state[u] = kDone;
    path.clear();
  }
}

std::vector<DepSentence> parse_conllu(std::string_view text, std::string_view source) {
  std::vector<DepSentence> sentences;
  DepSentence current;
  std::size_t sentence_line = 0;

  auto flush = [&] {
    if (current.tokens.empty()) return;
    for (auto& tok : current.tokens) {
      if (tok.head == -1) current.root = static_cast<int>(&tok - current.tokens.data());
    }
    try {
      validate_tree(current);
    } catch (const DataError& e) {
      throw DataError(where(source, sentence_line) + ": " + e.what());
    }
    sentences.push_back(std::move(current));
    current = DepSentence{};
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line.empty()) {
      flush();
      if (nl == text.size()) break;
      continue;
    }
    if (line.front() == '#') continue;

    const auto cols = split_tabs(line);
    if (cols.size() != 10) {
      throw DataError(where(source, line_no) + ": expected 10 tab-separated columns, found " +
                      std::to_string(cols.size()));
    }
    if (cols[0].find_first_of("-.") != std::string_view::npos) continue;

    int id = 0;
    int head = 0;
    if (!parse_int(cols[0], id) || id != static_cast<int>(current.tokens.size()) + 1) {
      throw DataError(where(source, line_no) + ": unexpected token id '" + std::string(cols[0]) + "'");
    }
    if (!parse_int(cols[6], head) || head < 0) {
      throw DataError(where(source, line_no) + ": invalid head '" + std::string(cols[6]) + "'");
    }
    if (current.tokens.empty()) sentence_line = line_no;
    current.tokens.push_back(DepToken{std::string(cols[1]), std::string(cols[2]), std::string(cols[3]),
                                      head - 1, std::string(cols[7])});
    if (nl == text.size()) break;
  }
  flush();
  return sentences;
}

}  // namespace fda
