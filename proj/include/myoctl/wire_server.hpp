#pragma once

#include "myoctl/session.hpp"

#include <cstdint>
#include <memory>
#include <string>

namespace myoctl {

// WebSocket endpoint speaking the wire protocol (wire.hpp), one text frame per
// message. Runs on its own I/O thread; commands reach the session through
// Session::handle_command and telemetry through a drop-oldest subscription,
// so a slow or dead client never stalls the tick loop.
class WireServer {
public:
    // port 0 picks a free port.
    WireServer(Session& session, const std::string& address, std::uint16_t port);
    ~WireServer();

    WireServer(const WireServer&) = delete;
    WireServer& operator=(const WireServer&) = delete;

    std::uint16_t port() const noexcept;
    std::size_t connections() const noexcept;
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Splits "host:port"; throws Error(validation) on malformed input.
std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& text);

} // namespace myoctl
