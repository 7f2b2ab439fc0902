#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sylkit {

enum class ErrorCode {
  DimensionMismatch,
  ParseError,
  NonConvergence,
  NotHermitian,
  SingularOperator,
  Breakdown,
  NotOrthonormal,
  SingularTau,
  InvalidField,
  InvalidGeometry,
  ReplayMismatch,
  RequiresVerification,
  UnknownGenerator,
  IoError,
  InvalidConfig,
};

const char* to_string(ErrorCode code) noexcept;

/// Base of every error thrown by the library. Carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what)
      : Error(ErrorCode::DimensionMismatch, what) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(ErrorCode::ParseError,
              "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class NonConvergence : public Error {
 public:
  explicit NonConvergence(const std::string& what)
      : Error(ErrorCode::NonConvergence, what) {}
};

class NotHermitian : public Error {
 public:
  explicit NotHermitian(const std::string& what)
      : Error(ErrorCode::NotHermitian, what) {}
};

/// Raised when the spectra of the two Sylvester coefficients (nearly) overlap.
/// `row` and `col` index the offending pair of Schur diagonal entries.
class SingularOperator : public Error {
 public:
  SingularOperator(const std::string& what, std::size_t row, std::size_t col)
      : Error(ErrorCode::SingularOperator, what), row_(row), col_(col) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

class Breakdown : public Error {
 public:
  Breakdown(const std::string& what, std::size_t column)
      : Error(ErrorCode::Breakdown, what), column_(column) {}

  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

class NotOrthonormal : public Error {
 public:
  explicit NotOrthonormal(const std::string& what)
      : Error(ErrorCode::NotOrthonormal, what) {}
};

class SingularTau : public Error {
 public:
  explicit SingularTau(const std::string& what)
      : Error(ErrorCode::SingularTau, what) {}
};

class InvalidField : public Error {
 public:
  explicit InvalidField(const std::string& what)
      : Error(ErrorCode::InvalidField, what) {}
};

class InvalidGeometry : public Error {
 public:
  explicit InvalidGeometry(const std::string& what)
      : Error(ErrorCode::InvalidGeometry, what) {}
};

class ReplayMismatch : public Error {
 public:
  ReplayMismatch(const std::string& what, std::size_t step)
      : Error(ErrorCode::ReplayMismatch, what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace sylkit
