#pragma once

#include <stdexcept>
#include <string>

namespace congae {

/// Broad failure class; the CLI maps each to its exit status.
enum class ErrorKind {
  config = 1,   // usage, configuration, precondition on user-supplied settings
  data = 2,     // unreadable or malformed input files
  numeric = 3,  // non-finite values, degenerate statistics, shape mismatches
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

/// A mapped column is absent from the header row.
class SchemaError : public DataError {
 public:
  explicit SchemaError(const std::string& column)
      : DataError("schema error: missing column '" + column + "'"), column_(column) {}
  const std::string& column() const noexcept { return column_; }

 private:
  std::string column_;
};

class RowError : public DataError {
 public:
  RowError(std::size_t line, const std::string& reason)
      : DataError("line " + std::to_string(line) + ": " + reason), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(ErrorKind::numeric, what) {}
};

class DimensionError : public NumericError {
 public:
  explicit DimensionError(const std::string& what) : NumericError("dimension error: " + what) {}
};

class DomainError : public NumericError {
 public:
  explicit DomainError(const std::string& what) : NumericError("domain error: " + what) {}
};

/// Throws DimensionError when `ok` is false.
void require_dims(bool ok, const std::string& what);

}  // namespace congae
