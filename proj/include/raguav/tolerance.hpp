#pragma once

#include <cmath>
#include <optional>
#include <string_view>

namespace raguav {

enum class ToleranceKind { relative, absolute };

inline const char* to_string(ToleranceKind kind) noexcept {
  return kind == ToleranceKind::relative ? "relative" : "absolute";
}

inline std::optional<ToleranceKind> parse_tolerance_kind(std::string_view name) noexcept {
  if (name == "relative") return ToleranceKind::relative;
  if (name == "absolute") return ToleranceKind::absolute;
  return std::nullopt;
}

inline constexpr double kGlobalTolerance = 1e-4;
inline constexpr double kDefaultQuestionTolerance = 1e-3;

struct ToleranceSpec {
  ToleranceKind kind = ToleranceKind::relative;
  double value = kDefaultQuestionTolerance;

  bool operator==(const ToleranceSpec&) const = default;
};

/// relative: |pred - gt| <= value * max(1, |gt|); absolute: |pred - gt| <= value.
inline bool exact_match(double pred, double gt, const ToleranceSpec& tol) noexcept {
  if (!std::isfinite(pred)) return false;
  const double diff = std::fabs(pred - gt);
  if (tol.kind == ToleranceKind::absolute) return diff <= tol.value;
  return diff <= tol.value * std::fmax(1.0, std::fabs(gt));
}

}  // namespace raguav
