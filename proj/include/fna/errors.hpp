#ifndef FNA_ERRORS_HPP
#define FNA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fna {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact arithmetic left the representable range.
struct OverflowError : Error {
  using Error::Error;
};

// An enumeration or layer construction exceeded its configured budget.
struct BudgetError : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace fna

#endif
