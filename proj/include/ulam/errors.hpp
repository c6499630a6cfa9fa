#pragma once

#include <cstddef>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace ulam {

inline constexpr const char* kVersion = "0.1.0";

/// Malformed arguments: bad tables, dimension mismatches, unreduced words.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A product or quotient needed by a computation falls outside a map's
/// finite domain. `what()` names the offending pair.
class DomainEscape : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Enumeration or dimension cap exceeded.
class CapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// An iterative solver stopped without a certified answer.
class ConvergenceFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultElementCap = 200000;
inline constexpr int kMaxHilbertDim = 64;

/// Element cap for enumerations; ULAM_LAB_MAX_ELEMENTS overrides the default.
inline std::size_t element_cap() {
  if (const char* env = std::getenv("ULAM_LAB_MAX_ELEMENTS")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultElementCap;
}

}  // namespace ulam
