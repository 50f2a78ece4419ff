#include "tropo/errors.hpp"

namespace tropo {

const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::Io: return "IoError";
    case ErrorKind::UnstableSystem: return "UnstableSystem";
    case ErrorKind::SingularAtFrequency: return "SingularAtFrequency";
    case ErrorKind::NonPositiveDefinite: return "NonPositiveDefinite";
    case ErrorKind::RecurrenceSingular: return "RecurrenceSingular";
    case ErrorKind::DivergentPurityIntegral: return "DivergentPurityIntegral";
    case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
    }
    return "Unknown";
}

} // namespace tropo
