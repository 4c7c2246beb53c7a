#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace intent_miner {

/// Unrecoverable failure raised by any stage of the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Recoverable problem tied to an input line (1-based; 0 when not line-bound).
struct Diagnostic {
  std::size_t line = 0;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

inline std::string to_string(const Diagnostic& d) {
  if (d.line == 0) return d.message;
  return "line " + std::to_string(d.line) + ": " + d.message;
}

}  // namespace intent_miner
