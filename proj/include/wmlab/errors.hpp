#pragma once

#include <stdexcept>
#include <string>

namespace wmlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Incompatible grids, component counts or time grids.
struct ShapeError : Error {
  using Error::Error;
};

// Dyadic scale or parameter outside what the grid can represent.
struct RangeError : Error {
  using Error::Error;
};

struct ResolutionError : Error {
  using Error::Error;
};

// Too few samples, probes or records for the requested operation.
struct ArityError : Error {
  using Error::Error;
};

struct DegenerateInputError : Error {
  using Error::Error;
};

struct PreconditionError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace wmlab
