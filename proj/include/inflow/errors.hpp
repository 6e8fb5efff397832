#pragma once

#include <stdexcept>
#include <string>

namespace inflow {

// Base of every error raised by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error { public: using Error::Error; };
class NoSolution : public Error { public: using Error::Error; };
class InvalidRegion : public Error { public: using Error::Error; };
class InvalidStrengths : public Error { public: using Error::Error; };
class LaunchFailure : public Error { public: using Error::Error; };
class ConvergenceFailure : public Error { public: using Error::Error; };
class PositivityViolation : public Error { public: using Error::Error; };
class CflCollapse : public Error { public: using Error::Error; };
class InsufficientData : public Error { public: using Error::Error; };
class ConfigError : public Error { public: using Error::Error; };

}  // namespace inflow
