#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cbxor {

// Failure classes. The numeric values double as CLI exit codes.
enum class ErrorKind : int {
  usage = 2,
  io = 3,
  integrity = 4,
  format = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

struct UsageError : Error {
  explicit UsageError(const std::string& what) : Error(ErrorKind::usage, what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

struct IntegrityError : Error {
  explicit IntegrityError(const std::string& what)
      : Error(ErrorKind::integrity, what) {}
};

// Dimension mismatches and malformed image payloads.
struct FormatError : Error {
  explicit FormatError(const std::string& what) : Error(ErrorKind::format, what) {}
};

// Decoder failure pinned to a byte position in the input.
class DecodeError : public FormatError {
 public:
  DecodeError(const std::string& what, std::size_t offset)
      : FormatError(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace cbxor
