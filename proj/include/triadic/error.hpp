#pragma once

#include <stdexcept>
#include <string>

namespace triadic {

enum class ErrorCode {
    InvalidArgument,
    DegenerateRegime,  // repeated root of the drift cubic
    StuckState,        // total propensity is zero
    SingularSystem,
    Io,
};

/// Exception type thrown by every module. The code survives the trip
/// through the C API as a status value.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace triadic
