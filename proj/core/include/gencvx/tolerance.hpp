#pragma once

#include <string_view>

namespace gencvx {

// Three-valued comparison result. `unsure` marks values inside the hysteresis
// zone between one and ten bands, which are never turned into pass or fail.
enum class Truth { no, yes, unsure };

inline constexpr double kStrictScale = 1e-7;
inline constexpr double kHysteresis = 10.0;
// Band for dimensionless quantities (p, λb, ratios of value gaps).
inline constexpr double kRelativeBand = 1e-7;

// ε_strict = 1e-7·(1 + |f(x)| + |f(y)|).
double strict_band(double fx, double fy);

// m > 0 tested strictly: yes when m > 10·band, no when m ≤ band.
Truth exceeds(double m, double band);

// |deviation| ≈ 0: yes when |dev| ≤ band, no when |dev| > 10·band.
Truth within(double deviation, double band);

// Premise and consequent combined into an implication outcome.
Truth implies(Truth premise, Truth consequent);

std::string_view to_string(Truth t);

}  // namespace gencvx
