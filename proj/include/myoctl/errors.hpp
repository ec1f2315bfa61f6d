#pragma once

#include <stdexcept>
#include <string>

namespace myoctl {

enum class ErrorCode {
    validation,           // a parameter violates its invariant
    state,                // command not allowed in the current phase
    calibration_required, // no valid profile available
    invalid_calibration,  // mvc <= rest
    insufficient_data,    // capture window too short
    parse,                // malformed input text
    schema,               // structurally wrong input (missing columns/keys)
    unsupported_version,
    io,
    contract,             // caller broke a precondition
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg, std::string field = {})
        : std::runtime_error(msg), code_(code), field_(std::move(field)) {}

    ErrorCode code() const noexcept { return code_; }
    // Offending parameter name for validation errors, empty otherwise.
    const std::string& field() const noexcept { return field_; }

private:
    ErrorCode code_;
    std::string field_;
};

} // namespace myoctl
