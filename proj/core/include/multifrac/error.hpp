#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace multifrac {

enum class ErrorKind {
    argument,
    resolution,
    domain,
    scale,
    capacity,
    internal_consistency,
    inconsistent_input,
    convergence,
    precondition,
    fit,
    io,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries a kind so callers (the CLI in
// particular) can map it to a stable machine-readable reason.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace multifrac
