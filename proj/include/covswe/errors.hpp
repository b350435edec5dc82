#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace covswe {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDegreeError : public Error {
 public:
  using Error::Error;
};

class InvalidMeshError : public Error {
 public:
  using Error::Error;
};

class DegenerateElementError : public Error {
 public:
  using Error::Error;
};

class DegenerateMetricError : public Error {
 public:
  using Error::Error;
};

/// Two interface nodes that were expected to coincide do not.
class PairingError : public Error {
 public:
  using Error::Error;
};

/// A pointwise physics routine received h <= 0 (or a non-finite depth).
class NonpositiveDepthError : public Error {
 public:
  explicit NonpositiveDepthError(double depth)
      : Error("nonpositive layer depth h = " + std::to_string(depth)), depth_(depth) {}

  double depth() const { return depth_; }

 private:
  double depth_;
};

/// Inadmissible field detected during a right-hand-side evaluation,
/// carrying the location so crash times can be reported.
class AdmissibilityError : public Error {
 public:
  AdmissibilityError(const std::string& what, std::size_t element, int i, int j, double t,
                     int stage = -1)
      : Error(what), element_(element), i_(i), j_(j), time_(t), stage_(stage) {}

  std::size_t element() const { return element_; }
  int node_i() const { return i_; }
  int node_j() const { return j_; }
  double time() const { return time_; }
  int stage() const { return stage_; }

  AdmissibilityError with_stage(int stage) const {
    return AdmissibilityError(what(), element_, i_, j_, time_, stage);
  }

 private:
  std::size_t element_;
  int i_;
  int j_;
  double time_;
  int stage_;
};

class InitializationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace covswe
