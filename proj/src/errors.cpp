#include "myoctl/errors.hpp"

namespace myoctl {

const char* to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::validation: return "validation";
    case ErrorCode::state: return "state";
    case ErrorCode::calibration_required: return "calibration_required";
    case ErrorCode::invalid_calibration: return "invalid_calibration";
    case ErrorCode::insufficient_data: return "insufficient_data";
    case ErrorCode::parse: return "parse";
    case ErrorCode::schema: return "schema";
    case ErrorCode::unsupported_version: return "unsupported_version";
    case ErrorCode::io: return "io";
    case ErrorCode::contract: return "contract";
    }
    return "unknown";
}

} // namespace myoctl
