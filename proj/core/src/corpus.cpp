#include "gencvx/corpus.hpp"

namespace gencvx {

namespace {

struct EntryDef {
  const char* name;
  const char* source;
  std::size_t dimension;
  const char* region;
  // pcvx, pccv, pl, qcvx, qccv, ql, ssqcvx, ssqccv, ssql (kAllProperties order)
  std::array<bool, 9> labels;
};

constexpr bool T = true;
constexpr bool F = false;

constexpr EntryDef kEntries[] = {
    {"affine", "2*x1 - 3*x2 + 1", 2, "box(-1..1, -1..1)", {T, T, T, T, T, T, T, T, T}},
    {"fractional", "x2/x1", 2, "x1 > 0.05, box(0..2, -1..1)", {T, T, T, T, T, T, T, T, T}},
    {"arctan", "atan(x1)", 1, "box(-3..3)", {T, T, T, T, T, T, T, T, T}},
    {"cubic", "x1^3", 1, "box(-1..1)", {F, F, F, T, T, T, T, T, T}},
    {"ramp", "x1 + abs(x1)", 1, "box(-1..1)", {T, F, F, T, T, T, T, F, F}},
    {"piecewise", "max(x1, 2*x1)", 1, "box(-1..1)", {T, T, T, T, T, T, T, T, T}},
    {"paraboloid", "x1^2 + x2^2", 2, "box(-1..1, -1..1)", {T, F, F, T, F, F, T, F, F}},
};

CorpusEntry build(const EntryDef& s) {
  PropertyLabels labels;
  for (std::size_t i = 0; i < kAllProperties.size(); ++i) labels[kAllProperties[i]] = s.labels[i];
  return CorpusEntry{FunctionHandle::from_expression(s.name, parse(s.source, s.dimension), s.dimension),
                     Region::parse(s.region, s.dimension), std::move(labels), s.source};
}

}  // namespace

std::vector<CorpusEntry> corpus() {
  std::vector<CorpusEntry> out;
  for (const EntryDef& s : kEntries) out.push_back(build(s));
  return out;
}

std::optional<CorpusEntry> find_corpus_entry(std::string_view name) {
  for (const EntryDef& s : kEntries) {
    if (name == s.name) return build(s);
  }
  return std::nullopt;
}

std::vector<std::string> corpus_names() {
  std::vector<std::string> names;
  for (const EntryDef& s : kEntries) names.emplace_back(s.name);
  return names;
}

}  // namespace gencvx
