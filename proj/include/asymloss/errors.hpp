#pragma once

#include <stdexcept>
#include <string>

namespace asymloss {

/// Raised when an iterative numerical method fails to reach its tolerance.
/// Carries the error estimate that was actually achieved.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double achieved_tolerance)
      : std::runtime_error(what), achieved_tolerance_(achieved_tolerance) {}

  double achieved_tolerance() const noexcept { return achieved_tolerance_; }

 private:
  double achieved_tolerance_;
};

class InsufficientDataError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ZeroSpreadError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace asymloss
