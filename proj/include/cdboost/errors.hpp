#ifndef CDBOOST_ERRORS_HPP
#define CDBOOST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cdboost {

// Bad user input: malformed CSV, out-of-range parameters, missing files.
// The CLI maps this to exit code 2.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical breakdown: simplex cycling, bracket failure without fallback.
// The CLI maps this to exit code 3.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cdboost

#endif
