#pragma once

#include <stdexcept>
#include <string>

namespace spinlab {

// Bad user input: unknown spins, malformed programs or config files,
// out-of-range parameters. Maps to CLI exit code 1.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical failure: non-convergent integration, singular inversions,
// Nyquist violations. Maps to CLI exit code 2.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spinlab
