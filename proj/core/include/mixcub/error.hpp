#pragma once

#include <stdexcept>
#include <string>

namespace mixcub {

enum class Errc {
  overflow_guard,
  range_guard,
  size_guard,
  cap_exceeded,
  dimension_mismatch,
  missing_exact_integral,
  unsupported_exponent,
  insufficient_cells,
  vanishing_check_failed,
  degenerate_fit,
  invalid_argument,
  parse_error,
};

const char* to_string(Errc code) noexcept;

/// Every failure raised by the library. Guard violations (numeric range and
/// size limits) are distinguished so callers such as the CLI can map them to
/// a dedicated exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

  bool is_guard() const noexcept {
    return code_ == Errc::overflow_guard || code_ == Errc::range_guard ||
           code_ == Errc::size_guard || code_ == Errc::cap_exceeded;
  }

 private:
  Errc code_;
};

}  // namespace mixcub
