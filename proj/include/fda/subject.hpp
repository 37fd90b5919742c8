#pragma once

#include <string>

namespace fda {

/// Dense index 0..S-1 within one corpus, plus a unique readable label.
using SubjectId = int;

struct Subject {
  SubjectId id = 0;
  std::string label;
};

}  // namespace fda
