#include "multifrac/error.hpp"

namespace multifrac {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::argument: return "argument";
    case ErrorKind::resolution: return "resolution";
    case ErrorKind::domain: return "domain";
    case ErrorKind::scale: return "scale";
    case ErrorKind::capacity: return "capacity";
    case ErrorKind::internal_consistency: return "internal-consistency";
    case ErrorKind::inconsistent_input: return "inconsistent-input";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::fit: return "fit";
    case ErrorKind::io: return "io";
    }
    return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace multifrac
