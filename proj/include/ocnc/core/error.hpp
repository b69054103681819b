#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <stdexcept>
#include <string>

namespace ocnc {

// Root of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input text does not follow the documented format (bad header, bad JSON...).
class FormatError : public Error {
 public:
  using Error::Error;
};

// A single data row is invalid. `row()` is 1-based over data rows (header excluded).
class RowError : public FormatError {
 public:
  RowError(std::size_t row, const std::string& what)
      : FormatError("row " + std::to_string(row) + ": " + what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class NotFoundError : public Error {
 public:
  explicit NotFoundError(const std::string& name)
      : Error("not found: " + name), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class EmptyReportError : public Error {
 public:
  using Error::Error;
};

class UndefinedCorrelationError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  DimensionMismatchError(std::size_t expected, std::size_t got)
      : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
              std::to_string(got)) {}
};

class DivergenceError : public Error {
 public:
  explicit DivergenceError(std::size_t epoch)
      : Error("training diverged (non-finite loss) at epoch " + std::to_string(epoch)),
        epoch_(epoch) {}
  std::size_t epoch() const noexcept { return epoch_; }

 private:
  std::size_t epoch_;
};

// Brute force refuses to run when the feasible set is larger than the configured cap.
class CapExceededError : public Error {
 public:
  CapExceededError(std::uint64_t required, std::uint64_t cap)
      : Error("brute force needs " + std::to_string(required) +
              " evaluations, cap is " + std::to_string(cap)),
        required_(required) {}
  std::uint64_t required() const noexcept { return required_; }

 private:
  std::uint64_t required_;
};

// Wraps a failure with the pipeline stage it happened in; cause() holds the original.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what, std::exception_ptr cause = nullptr)
      : Error(stage + ": " + what), stage_(std::move(stage)), cause_(std::move(cause)) {}
  const std::string& stage() const noexcept { return stage_; }
  const std::exception_ptr& cause() const noexcept { return cause_; }

 private:
  std::string stage_;
  std::exception_ptr cause_;
};

}  // namespace ocnc
