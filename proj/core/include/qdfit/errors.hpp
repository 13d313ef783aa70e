#pragma once

#include <stdexcept>
#include <string>

namespace qdfit {

// Error taxonomy mirrors the CLI exit codes: IoError -> 1, ParseError -> 2,
// NumericError -> 3.

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qdfit
