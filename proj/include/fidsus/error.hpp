#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fidsus {

/// Machine-readable failure classes. The CLI prints these names verbatim.
enum class ErrorKind {
  NonHermitianInput,
  NoConvergence,
  DegenerateGroundState,
  UnboundedIntegral,
  InvalidParams,
  TooLarge,
  PoleOnGrid,
  QuadratureFailure,
  DegenerateFit,
  Ambiguous,
  InvalidNu,
  UnsupportedModel,
  ConfigError,
};

std::string_view name(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fidsus
