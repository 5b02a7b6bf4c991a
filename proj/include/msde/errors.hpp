#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace msde {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error { using Error::Error; };
class AsymmetryError : public Error { using Error::Error; };
class SingularityError : public Error { using Error::Error; };
class SpectrumError : public Error { using Error::Error; };
class ParameterError : public Error { using Error::Error; };
class FrameError : public Error { using Error::Error; };
class PreconditionError : public Error { using Error::Error; };
class DivergenceError : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };

// Evaluation outside a retraction's or manifold's open domain.
class DomainError : public Error { using Error::Error; };

class StepFailure : public Error {
 public:
  StepFailure(const std::string& what, long path = -1, long step = -1)
      : Error(what), path_(path), step_(step) {}
  long path() const { return path_; }
  long step() const { return step_; }

 private:
  long path_;
  long step_;
};

}  // namespace msde
