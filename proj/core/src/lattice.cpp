#include <algorithm>

#include "gencvx/campaign.hpp"

namespace gencvx {

const std::vector<LatticeEdge>& implication_lattice() {
  using P = Property;
  static const std::vector<LatticeEdge> edges = {
      {P::pseudolinear, P::pseudoconvex},
      {P::pseudolinear, P::pseudoconcave},
      {P::pseudolinear, P::semistrictly_quasiconvex},
      {P::pseudolinear, P::semistrictly_quasiconcave},
      {P::pseudolinear, P::semistrictly_quasilinear},
      {P::pseudoconvex, P::quasiconvex},
      {P::pseudoconcave, P::quasiconcave},
      {P::semistrictly_quasiconvex, P::quasiconvex},
      {P::semistrictly_quasiconcave, P::quasiconcave},
      {P::semistrictly_quasilinear, P::semistrictly_quasiconvex},
      {P::semistrictly_quasilinear, P::semistrictly_quasiconcave},
      {P::semistrictly_quasilinear, P::quasilinear},
      {P::quasilinear, P::quasiconvex},
      {P::quasilinear, P::quasiconcave},
  };
  return edges;
}

std::vector<LatticeViolation> check_implication_lattice(std::span<const NamedVerdicts> verdicts) {
  std::vector<LatticeViolation> out;
  for (const auto& [name, list] : verdicts) {
    auto verdict_of = [&](Property p) -> std::optional<Verdict> {
      const auto it = std::find_if(list.begin(), list.end(), [&](const PropertyVerdict& v) { return v.property == p; });
      if (it == list.end()) return std::nullopt;
      return it->verdict;
    };
    for (const LatticeEdge& e : implication_lattice()) {
      if (verdict_of(e.antecedent) == Verdict::holds_at_samples && verdict_of(e.consequent) == Verdict::refuted) {
        out.push_back({name, e.antecedent, e.consequent});
      }
    }
  }
  return out;
}

}  // namespace gencvx
