#include "fidsus/error.hpp"

namespace fidsus {

std::string_view name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonHermitianInput: return "NonHermitianInput";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DegenerateGroundState: return "DegenerateGroundState";
    case ErrorKind::UnboundedIntegral: return "UnboundedIntegral";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::PoleOnGrid: return "PoleOnGrid";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::DegenerateFit: return "DegenerateFit";
    case ErrorKind::Ambiguous: return "Ambiguous";
    case ErrorKind::InvalidNu: return "InvalidNu";
    case ErrorKind::UnsupportedModel: return "UnsupportedModel";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace fidsus
