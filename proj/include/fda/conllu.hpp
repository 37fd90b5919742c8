#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fda {

struct DepToken {
  std::string form;
  std::string lemma;
  std::string upos;
  int head = -1;  // 0-based index of the governing token, -1 for the root
  std::string deprel;
};

/// One dependency-parsed sentence. Heads must form a single tree.
struct DepSentence {
  std::vector<DepToken> tokens;
  int root = -1;
};

/// Throws DataError unless the sentence has exactly one root, `root` points
/// at it, and every head chain reaches the root without cycles.
void validate_tree(const DepSentence& sentence);

/// Parses 10-column tab-separated CoNLL-U. Comment lines (`#`) are ignored,
/// as are multiword-token ranges (`1-2`) and empty nodes (`1.1`). Sentences
/// are separated by blank lines. `source` names the input in error messages.
std::vector<DepSentence> parse_conllu(std::string_view text, std::string_view source = "<conllu>");

}  // namespace fda
