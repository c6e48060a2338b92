#pragma once

#include <stdexcept>
#include <string>

namespace slicetool {

// Base for every error the toolkit reports to callers.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Grammar violation in SLIR text. Line and column are 1-based.
class SyntaxError : public Error {
public:
  SyntaxError(const std::string &msg, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line), column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

// Well-formed text that violates a program model invariant.
class ValidationError : public Error {
public:
  using Error::Error;
};

class DatasetFormatError : public Error {
public:
  DatasetFormatError(const std::string &msg, int line)
      : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}

  int line() const { return line_; }

private:
  int line_;
};

// Failure during dependence construction (e.g. a statement with no path
// to the method exit).
class AnalysisError : public Error {
public:
  using Error::Error;
};

class UnknownSource : public Error {
public:
  using Error::Error;
};

class UnsupportedStatement : public Error {
public:
  using Error::Error;
};

class BindError : public Error {
public:
  using Error::Error;
};

} // namespace slicetool
