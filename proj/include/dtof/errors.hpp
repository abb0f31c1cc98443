#pragma once

#include <stdexcept>
#include <string>

namespace dtof {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range configuration. The message names the offending
/// field or invariant.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The range solver could not produce a root.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// SNR at the minimum range is already below the threshold.
class NoDetectionError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// SNR still above the threshold at the search cap.
class UnboundedRangeError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Background and dark occupancy fill the whole SiPM array.
class SaturationError : public SolverError {
 public:
  using SolverError::SolverError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dtof
