#pragma once

#include <stdexcept>

namespace planimm {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridMismatchError : Error {
  using Error::Error;
};

struct NotImmersionError : Error {
  using Error::Error;
};

struct DefectiveEigenError : Error {
  using Error::Error;
};

struct TrappedGeodesicError : Error {
  using Error::Error;
};

struct SegmentConsistencyError : Error {
  using Error::Error;
};

struct BoundaryMismatchError : Error {
  using Error::Error;
};

struct IncompatiblePrescriptionError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace planimm
