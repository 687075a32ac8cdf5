#pragma once

#include <stdexcept>
#include <string>

namespace finscale {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input text: bad row, bad number, bad timestamp. Message names the line.
struct ParseError : Error {
  using Error::Error;
};

// Structurally unusable data: non-monotone timestamps, degenerate series,
// too few samples, single-sign series, out-of-range lag.
struct DataError : Error {
  using Error::Error;
};

// Invalid argument values (nu <= 2, H outside (0,1), bad window split, ...).
struct ParamError : Error {
  using Error::Error;
};

// Numerical fit failure: optimizer breakdown, undefined moment, empty fit range.
struct FitError : Error {
  using Error::Error;
};

// Divergent stochastic integration. Message names the offending step size.
struct StabilityError : Error {
  using Error::Error;
};

}  // namespace finscale
