#pragma once

#include <stdexcept>
#include <string>

namespace mpgreedy {

/// Raised when a computation cannot proceed: bracket failures, non-finite
/// values, violated solver hypotheses.
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised on malformed inputs (bad flags, unreadable files, domain violations).
class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mpgreedy
