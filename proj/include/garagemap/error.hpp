#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace garagemap {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed image or text input. `offset` is the byte position where parsing failed.
class FormatError : public Error {
public:
  FormatError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

class GeometryError : public Error {
public:
  using Error::Error;
};

// Too few inputs for an operation (samples, control points).
class ArityError : public Error {
public:
  using Error::Error;
};

class SingularFitError : public Error {
public:
  using Error::Error;
};

// A point or cell outside the grid. Carries the computed cell index.
class BoundsError : public Error {
public:
  BoundsError(const std::string& what, long long row, long long col)
      : Error(what + " (cell " + std::to_string(row) + "," + std::to_string(col) + ")"),
        row_(row), col_(col) {}
  long long row() const noexcept { return row_; }
  long long col() const noexcept { return col_; }

private:
  long long row_;
  long long col_;
};

class LookupError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

// Failure while reading a persisted table; names the file and 1-based line.
class LoadError : public Error {
public:
  LoadError(const std::string& file, std::size_t line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what), file_(file), line_(line), detail_(what) {}
  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

private:
  std::string file_;
  std::size_t line_;
  std::string detail_;
};

// Route endpoint sits on an occupied cell.
class PlacementError : public Error {
public:
  using Error::Error;
};

// No route connects the endpoints.
class UnreachableError : public Error {
public:
  using Error::Error;
};

} // namespace garagemap
