#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tightlab {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Input outside the domain of a formula (non-finite powers, zero unit cost, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

// Parameter set violates a documented invariant.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

// Hiring-cost calibration has a non-positive denominator.
class CalibrationInfeasible : public Error {
public:
  CalibrationInfeasible(const std::string& what, double denominator)
      : Error(what), denominator_(denominator) {}

  double denominator() const noexcept { return denominator_; }
  bool negative() const noexcept { return denominator_ < 0.0; }

private:
  double denominator_;
};

// |nu * eta_lt| >= 1: the feedback series does not converge.
class DivergentFeedback : public Error {
public:
  DivergentFeedback(const std::string& what, double omega) : Error(what), omega_(omega) {}
  double omega() const noexcept { return omega_; }

private:
  double omega_;
};

// Design matrix is rank deficient; carries the names of the dropped columns.
class RankDeficient : public Error {
public:
  RankDeficient(const std::string& what, std::vector<std::string> columns)
      : Error(what), columns_(std::move(columns)) {}
  const std::vector<std::string>& columns() const noexcept { return columns_; }

private:
  std::vector<std::string> columns_;
};

// Fewer excluded instruments than endogenous regressors.
class UnderIdentified : public Error {
public:
  using Error::Error;
};

// Malformed input file; row is 1-based counting the header line, column is the header name.
class SchemaError : public Error {
public:
  SchemaError(const std::string& file, std::size_t row, const std::string& column,
              const std::string& message)
      : Error(file + ":" + std::to_string(row) + (column.empty() ? "" : " [" + column + "]") +
              ": " + message),
        file_(file), row_(row), column_(column) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t row() const noexcept { return row_; }
  const std::string& column() const noexcept { return column_; }

private:
  std::string file_;
  std::size_t row_;
  std::string column_;
};

}  // namespace tightlab
