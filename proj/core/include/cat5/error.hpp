#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cat5 {

enum class ErrorCode {
  NotSquare,
  NonFinite,
  Asymmetric,
  NonzeroDiagonal,
  ZeroOffDiagonal,
  NegativeDistance,
  TriangleViolation,
  NotRealizable,
  InvalidArgument,
  NoConvergence,
  NotPSD,
  NotMinkowski,
  TooManyNegativeEigenvalues,
  DegenerateArray,
  NotTimelike,
  DegenerateFacet,
  StratumA0,
  EdgesNotCovered,
  ComparisonFailed,
  UnknownGraph,
  BadDistances,
  RejectionBudgetExceeded,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Base of every structured error thrown by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class TriangleViolationError : public Error {
 public:
  TriangleViolationError(std::size_t i, std::size_t j, std::size_t k,
                         const std::string& what)
      : Error(ErrorCode::TriangleViolation, what), i_(i), j_(j), k_(k) {}

  std::size_t i() const noexcept { return i_; }
  std::size_t j() const noexcept { return j_; }
  std::size_t k() const noexcept { return k_; }

 private:
  std::size_t i_, j_, k_;
};

class TooManyNegativeEigenvaluesError : public Error {
 public:
  TooManyNegativeEigenvaluesError(int count, const std::string& what)
      : Error(ErrorCode::TooManyNegativeEigenvalues, what), count_(count) {}

  int count() const noexcept { return count_; }

 private:
  int count_;
};

class ParseError : public Error {
 public:
  /// row/col are 1-based; 0 means "not applicable".
  ParseError(std::size_t row, std::size_t col, const std::string& what)
      : Error(ErrorCode::ParseError, what), row_(row), col_(col) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_, col_;
};

}  // namespace cat5
