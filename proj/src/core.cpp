#include "hypsing/core.hpp"

namespace hypsing {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Domain: return "Domain";
    case ErrorKind::Series: return "Series";
    case ErrorKind::ModelMismatch: return "ModelMismatch";
    case ErrorKind::DegenerateFit: return "DegenerateFit";
    case ErrorKind::HyperbolicMonodromy: return "HyperbolicMonodromy";
    case ErrorKind::NegativeTranslation: return "NegativeTranslation";
    case ErrorKind::InconsistentInput: return "InconsistentInput";
    case ErrorKind::VerificationFailed: return "VerificationFailed";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace hypsing
