#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace attain {

enum class ErrorCode {
  InvalidSpec,
  NotApplicable,
  NotPositive,
  NoConvergence,
  NotPositiveSemidefinite,
  RankDeficient,
  PredictionMismatch,
  WitnessOutOfRange,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// A composite operator failed the positivity hypothesis.
class NotPositiveError : public Error {
 public:
  NotPositiveError(double eigenvalue, std::size_t size, const std::string& message)
      : Error(ErrorCode::NotPositive, message), eigenvalue_(eigenvalue), size_(size) {}

  double eigenvalue() const noexcept { return eigenvalue_; }
  std::size_t truncation_size() const noexcept { return size_; }

 private:
  double eigenvalue_;
  std::size_t size_;
};

}  // namespace attain
