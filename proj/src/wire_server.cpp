#include "myoctl/wire_server.hpp"

#include "myoctl/errors.hpp"
#include "myoctl/wire.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <atomic>
#include <charconv>
#include <deque>
#include <thread>

namespace myoctl {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

namespace {

constexpr std::size_t kOutboxLimit = 64;
constexpr std::size_t kSubscriptionCapacity = 512;
constexpr auto kFlushPeriod = std::chrono::milliseconds(5);

class Connection : public std::enable_shared_from_this<Connection> {
public:
    Connection(tcp::socket socket, Session& session, std::atomic<std::size_t>& live)
        : ws_(std::move(socket))
        , timer_(ws_.get_executor())
        , session_(session)
        , live_(live)
    {
        ++live_;
    }

    ~Connection() { --live_; }

    void start()
    {
        ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
        ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
            if (ec)
                return;
            self->sub_ = self->session_.subscribe(kSubscriptionCapacity);
            self->read();
            self->flush();
        });
    }

private:
    void read()
    {
        ws_.async_read(in_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) {
                self->close();
                return;
            }
            const std::string text = beast::buffers_to_string(self->in_.data());
            self->in_.consume(self->in_.size());
            self->send(handle_wire_message(self->session_, text));
            self->read();
        });
    }

    void flush()
    {
        if (closed_)
            return;
        while (outbox_.size() < kOutboxLimit) {
            auto n = sub_->poll();
            if (!n)
                break;
            send(encode_notice(*n));
        }
        timer_.expires_after(kFlushPeriod);
        timer_.async_wait([self = shared_from_this()](beast::error_code ec) {
            if (!ec)
                self->flush();
        });
    }

    void send(std::string msg)
    {
        if (closed_)
            return;
        outbox_.push_back(std::move(msg));
        if (outbox_.size() == 1)
            write();
    }

    void write()
    {
        ws_.text(true);
        ws_.async_write(asio::buffer(outbox_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) {
                self->close();
                return;
            }
            self->outbox_.pop_front();
            if (!self->outbox_.empty())
                self->write();
        });
    }

    void close()
    {
        closed_ = true;
        timer_.cancel();
        outbox_.clear();
    }

    websocket::stream<beast::tcp_stream> ws_;
    asio::steady_timer timer_;
    beast::flat_buffer in_;
    std::deque<std::string> outbox_;
    std::shared_ptr<Subscription> sub_;
    Session& session_;
    std::atomic<std::size_t>& live_;
    bool closed_ = false;
};

} // namespace

struct WireServer::Impl {
    Impl(Session& s, const std::string& address, std::uint16_t port)
        : session(s)
        , acceptor(ioc)
    {
        beast::error_code ec;
        const auto addr = asio::ip::make_address(address == "localhost" ? "127.0.0.1" : address, ec);
        if (ec)
            throw Error(ErrorCode::validation, "bad listen address '" + address + "'", "listen");
        const tcp::endpoint ep(addr, port);
        acceptor.open(ep.protocol(), ec);
        if (!ec)
            acceptor.set_option(asio::socket_base::reuse_address(true), ec);
        if (!ec)
            acceptor.bind(ep, ec);
        if (!ec)
            acceptor.listen(asio::socket_base::max_listen_connections, ec);
        if (ec)
            throw Error(ErrorCode::io, "cannot listen on " + address + ":" + std::to_string(port) + ": " + ec.message());
        bound_port = acceptor.local_endpoint().port();
        accept();
        thread = std::thread([this] { ioc.run(); });
    }

    void accept()
    {
        acceptor.async_accept(asio::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
            if (ec)
                return;
            std::make_shared<Connection>(std::move(socket), session, live)->start();
            accept();
        });
    }

    void stop()
    {
        if (stopped.exchange(true))
            return;
        ioc.stop();
        if (thread.joinable())
            thread.join();
    }

    Session& session;
    std::atomic<std::size_t> live{0}; // outlives the io_context, which owns the connections
    std::atomic<bool> stopped{false};
    asio::io_context ioc{1};
    tcp::acceptor acceptor;
    std::thread thread;
    std::uint16_t bound_port = 0;
};

WireServer::WireServer(Session& session, const std::string& address, std::uint16_t port)
    : impl_(std::make_unique<Impl>(session, address, port))
{
}

WireServer::~WireServer()
{
    stop();
}

std::uint16_t WireServer::port() const noexcept
{
    return impl_->bound_port;
}

std::size_t WireServer::connections() const noexcept
{
    return impl_->live.load();
}

void WireServer::stop()
{
    if (impl_)
        impl_->stop();
}

std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& text)
{
    const auto colon = text.rfind(':');
    if (colon == std::string::npos || colon + 1 == text.size())
        throw Error(ErrorCode::validation, "expected ADDR:PORT, got '" + text + "'", "listen");
    unsigned port = 0;
    const char* b = text.data() + colon + 1;
    const char* e = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(b, e, port);
    if (ec != std::errc() || ptr != e || port > 65535)
        throw Error(ErrorCode::validation, "bad port in '" + text + "'", "listen");
    std::string host = text.substr(0, colon);
    if (host.empty())
        host = "0.0.0.0";
    return {host, static_cast<std::uint16_t>(port)};
}

} // namespace myoctl
