#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gencvx/function.hpp"
#include "gencvx/region.hpp"

namespace gencvx {

struct CorpusEntry {
  FunctionHandle function;
  Region region;
  PropertyLabels labels;  // every property in kAllProperties is labeled
  std::string source;     // DSL text of the function
};

// Built-in labeled functions: affine, fractional, arctan, cubic, ramp,
// piecewise, paraboloid. Labels were machine-checked by the grid oracle in
// tests/oracle before being fixed here.
std::vector<CorpusEntry> corpus();

std::optional<CorpusEntry> find_corpus_entry(std::string_view name);

std::vector<std::string> corpus_names();

}  // namespace gencvx
