#pragma once

#include <stdexcept>
#include <string>

namespace ale {

/// Argument outside the domain of a map or time change (|z| <= 1, t >= t_zeta, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Evaluation hit a branch-singular point of a particle map.
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or parameter combination.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested quantity needs data that was not recorded (e.g. event v-marks).
class FeatureUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ale
