#pragma once

#include <stdexcept>
#include <string>

namespace lrlprep {

enum class ErrorKind {
  invalid_argument,
  io,
  parse,
  out_of_range,
  empty_input,
};

// All library failures are reported through this exception; the C API maps
// `kind()` onto its status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace lrlprep
