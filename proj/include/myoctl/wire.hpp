#pragma once

// Text messages exchanged with the operator console, one JSON object per frame.
//
// inbound:  {"type":"set_config","patch":{...}}   {"type":"set_strategy","strategy":"proportional"}
//           {"type":"calibrate_rest"} {"type":"calibrate_mvc"} {"type":"start"} {"type":"stop"}
// outbound: {"type":"ack","command":...,"config":{...},"phase":...}
//           {"type":"error","field":...,"msg":...,"code":...}
//           {"type":"telemetry","t_ms":...,"emg_percent":...,"reference":...,"position":...,"phase":...,"config":{...}}
//           {"type":"state","phase":...,"calibrated":...,"t_ms":...,"config":{...}}

#include "myoctl/errors.hpp"
#include "myoctl/session.hpp"
#include "myoctl/telemetry.hpp"

#include <string>
#include <string_view>

namespace myoctl {

/// Throws Error(parse) for malformed JSON, Error(validation) naming the field otherwise.
Command parse_wire_command(std::string_view text);

std::string encode_reply(const Command& cmd, const CommandReply& reply);
std::string encode_error(const Error& e);
std::string encode_notice(const Notice& n);

// Parses, dispatches to the session and encodes the answer. Never throws.
std::string handle_wire_message(Session& session, std::string_view text);

} // namespace myoctl
