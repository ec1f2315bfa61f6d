#include "myoctl/wire.hpp"

#include "json_codec.hpp"

namespace myoctl {

Command parse_wire_command(std::string_view text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse, std::string("malformed message: ") + e.what(), "message");
    }
    if (!j.is_object())
        throw Error(ErrorCode::validation, "message must be a JSON object", "message");
    auto type_it = j.find("type");
    if (type_it == j.end() || !type_it->is_string())
        throw Error(ErrorCode::validation, "message needs a string 'type'", "type");
    const auto type = parse_command_type(type_it->get<std::string>());
    if (!type)
        throw Error(ErrorCode::validation, "unknown message type '" + type_it->get<std::string>() + "'", "type");

    Command cmd{*type, {}};
    if (*type == CommandType::set_config) {
        auto p = j.find("patch");
        if (p == j.end())
            throw Error(ErrorCode::validation, "set_config needs a 'patch' object", "patch");
        cmd.patch = patch_from_json(*p);
    } else if (*type == CommandType::set_strategy) {
        auto s = j.find("strategy");
        if (s == j.end())
            throw Error(ErrorCode::validation, "set_strategy needs a 'strategy'", "strategy");
        cmd.patch = patch_from_json(json{{"strategy", *s}});
    }
    return cmd;
}

std::string encode_reply(const Command& cmd, const CommandReply& reply)
{
    if (!reply.ok)
        return json{{"type", "error"},
                    {"command", std::string(to_string(cmd.type))},
                    {"field", reply.field},
                    {"msg", reply.message},
                    {"code", to_string(reply.code)}}
            .dump();
    return json{{"type", "ack"},
                {"command", std::string(to_string(cmd.type))},
                {"config", to_json(reply.config)},
                {"phase", std::string(to_string(reply.phase))}}
        .dump();
}

std::string encode_error(const Error& e)
{
    return json{{"type", "error"}, {"field", e.field()}, {"msg", e.what()}, {"code", to_string(e.code())}}.dump();
}

std::string encode_notice(const Notice& n)
{
    struct Visitor {
        std::string operator()(const TelemetryFrame& f) const
        {
            return json{{"type", "telemetry"},
                        {"t_ms", f.t_ms},
                        {"emg_percent", f.emg_percent},
                        {"reference", f.reference},
                        {"position", f.position},
                        {"phase", std::string(to_string(f.phase))},
                        {"config", to_json(f.config)}}
                .dump();
        }
        std::string operator()(const StateNotice& s) const
        {
            return json{{"type", "state"},
                        {"phase", std::string(to_string(s.phase))},
                        {"calibrated", s.calibrated},
                        {"t_ms", s.t_ms},
                        {"config", to_json(s.config)}}
                .dump();
        }
        std::string operator()(const ErrorNotice& e) const
        {
            return json{{"type", "error"}, {"field", e.field}, {"msg", e.message}, {"t_ms", e.t_ms}}.dump();
        }
    };
    return std::visit(Visitor{}, n);
}

std::string handle_wire_message(Session& session, std::string_view text)
{
    try {
        const Command cmd = parse_wire_command(text);
        return encode_reply(cmd, session.handle_command(cmd));
    } catch (const Error& e) {
        return encode_error(e);
    } catch (const std::exception& e) {
        return json{{"type", "error"}, {"field", ""}, {"msg", e.what()}, {"code", "internal"}}.dump();
    }
}

} // namespace myoctl
