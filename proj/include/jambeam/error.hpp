#pragma once

#include <stdexcept>
#include <string>

namespace jambeam {

enum class ErrorKind {
  InvalidArgument,
  UnknownId,
  Precondition,
  Schema,
  Buckled,
  Saturated,
  MaterialExhausted,
  Overload,
  Inconsistent,
  CyclicPrecedence,
};

const char* to_string(ErrorKind kind) noexcept;

// Every failure the library reports. `path` locates the offending input
// (e.g. "script[4].pouch") when the error originates in a document.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string path = {})
      : std::runtime_error(message), kind_(kind), path_(std::move(path)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& path() const noexcept { return path_; }

  Error with_path(const std::string& path) const {
    return Error(kind_, what(), path_.empty() ? path : path + "." + path_);
  }

 private:
  ErrorKind kind_;
  std::string path_;
};

}  // namespace jambeam
