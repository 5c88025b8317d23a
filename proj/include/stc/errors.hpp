#pragma once

#include <stdexcept>

namespace stc {

/// Input files that cannot be used (parse failures, inconsistent records).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad command-line usage detected after argument parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stc
