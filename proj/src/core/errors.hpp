#pragma once

#include <stdexcept>
#include <string>

namespace def {

// File-system or parse failure on external data.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical failure (solver non-convergence, non-finite intermediate).
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace def
