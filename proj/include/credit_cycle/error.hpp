#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace credit_cycle {

enum class ErrorKind {
  InvalidParameter,
  DegenerateEquation,
  Domain,
  NoFreeBoundary,
  NoBifurcation,
  PostCollapse,
  Singularity,
  SchemeFailure,
  Io,
  Validation,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a category so the CLI can map
// it onto a distinct exit status.
class ModelError : public std::runtime_error {
 public:
  ModelError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace credit_cycle
