#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sincmf {

/// Failure categories. The CLI prints the category name so scripts can
/// react to the kind of failure without parsing the message.
enum class ErrorCategory {
  invalid_argument,
  dimension_mismatch,
  pole_collision,
  breakdown,
  not_diagonalizable,
  saturation,
  blow_up,
  parse_error,
  scale_guard,
  convergence,
};

constexpr std::string_view to_string(ErrorCategory c) noexcept {
  switch (c) {
    case ErrorCategory::invalid_argument: return "invalid_argument";
    case ErrorCategory::dimension_mismatch: return "dimension_mismatch";
    case ErrorCategory::pole_collision: return "pole_collision";
    case ErrorCategory::breakdown: return "breakdown";
    case ErrorCategory::not_diagonalizable: return "not_diagonalizable";
    case ErrorCategory::saturation: return "saturation";
    case ErrorCategory::blow_up: return "blow_up";
    case ErrorCategory::parse_error: return "parse_error";
    case ErrorCategory::scale_guard: return "scale_guard";
    case ErrorCategory::convergence: return "convergence";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

namespace detail {

inline void require(bool cond, ErrorCategory category, const std::string& msg) {
  if (!cond) throw Error(category, msg);
}

inline void require_arg(bool cond, const std::string& msg) {
  require(cond, ErrorCategory::invalid_argument, msg);
}

}  // namespace detail
}  // namespace sincmf
