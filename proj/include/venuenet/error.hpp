#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace venuenet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent user input (files, arguments, configuration).
/// The CLI maps these to exit code 1.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A parse failure at a known position of an input stream.
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column = 0)
      : InputError(format(what, line, column)), line_(line), column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line, std::size_t column) {
    std::string pos = "line " + std::to_string(line);
    if (column > 0) pos += ", column " + std::to_string(column);
    return pos + ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

class DuplicateIdError : public InputError {
 public:
  explicit DuplicateIdError(const std::string& id)
      : InputError("duplicate record id \"" + id + "\""), id_(id) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

/// A venue key that is not part of the structure being queried.
class UnknownVenueError : public Error {
 public:
  explicit UnknownVenueError(const std::string& key)
      : Error("unknown venue \"" + key + "\""), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// A file or directory that could not be created or written.
class OutputError : public Error {
 public:
  explicit OutputError(const std::string& path)
      : Error("cannot write \"" + path + "\""), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace venuenet
