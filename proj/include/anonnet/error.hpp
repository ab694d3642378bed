#pragma once

#include <stdexcept>
#include <string>

namespace anonnet {

// Process exit codes used by the CLI.
enum class ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kData = 2,
  kNumerical = 3,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept { return ExitCode::kData; }
};

// Bad configuration, missing config files, invalid parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kUsage; }
};

// Malformed or inconsistent input data.
class DataError : public Error {
 public:
  using Error::Error;
};

// Raised by loaders; carries the 1-based line number and, when known, the field.
class ParseError : public DataError {
 public:
  ParseError(std::string path, std::size_t line, std::string field, const std::string& what)
      : DataError(format(path, line, field, what)),
        path_(std::move(path)),
        line_(line),
        field_(std::move(field)) {}

  const std::string& path() const noexcept { return path_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  static std::string format(const std::string& path, std::size_t line, const std::string& field,
                            const std::string& what) {
    std::string msg = path.empty() ? std::string("<input>") : path;
    msg += ":" + std::to_string(line) + ": ";
    if (!field.empty()) msg += "field " + field + ": ";
    return msg + what;
  }

  std::string path_;
  std::size_t line_;
  std::string field_;
};

// Account source failures during snowball expansion.
class SourceError : public DataError {
 public:
  using DataError::DataError;
};

// Iterative solver did not converge.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, int iterations)
      : Error(what + " did not converge after " + std::to_string(iterations) + " iterations"),
        iterations_(iterations) {}
  ExitCode exit_code() const noexcept override { return ExitCode::kNumerical; }
  int iterations() const noexcept { return iterations_; }

 private:
  int iterations_;
};

}  // namespace anonnet
