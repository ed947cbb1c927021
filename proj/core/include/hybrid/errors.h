#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hybrid {

enum class ErrorKind {
    DegenerateInput,
    Connectivity,
    Lookup,
    IllegalSend,
    IllegalIntroduction,
    SimulationAbort,
    GeometryInconsistency,
    EmbeddingCorruption,
    ProtocolBug,
    AssumptionViolation,
    NoPath,
    Dispatch,
    Generation,
    Io,
    NotReady,
    InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; callers switch on kind().
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace hybrid
