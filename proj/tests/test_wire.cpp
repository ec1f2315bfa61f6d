#include "myoctl/calibration.hpp"
#include "myoctl/errors.hpp"
#include "myoctl/session.hpp"
#include "myoctl/wire.hpp"
#include "myoctl/wire_server.hpp"
#include "support.hpp"

#include <doctest.h>
#include <json.hpp>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <chrono>
#include <thread>

using namespace myoctl;
using nlohmann::json;
using testing::VectorSource;

namespace {

SessionOptions live_options()
{
    SessionOptions o;
    o.profile = build_profile(0, 4095);
    o.control.strategy = Strategy::on_off;
    return o;
}

std::unique_ptr<SampleSource> endless(double v)
{
    return std::make_unique<VectorSource>(std::vector<double>(1'000'000, v));
}

} // namespace

TEST_CASE("inbound message parsing")
{
    auto c = parse_wire_command(R"({"type":"set_config","patch":{"th":30}})");
    CHECK(c.type == CommandType::set_config);
    CHECK(c.patch.th == 30.0);
    CHECK(parse_wire_command(R"({"type":"calibrate_rest"})").type == CommandType::calibrate_rest);
    CHECK(parse_wire_command(R"({"type":"calibrate_mvc"})").type == CommandType::calibrate_mvc);
    CHECK(parse_wire_command(R"({"type":"start"})").type == CommandType::start);
    CHECK(parse_wire_command(R"({"type":"stop"})").type == CommandType::stop);
    CHECK(parse_wire_command(R"({"type":"set_strategy","strategy":"proportional"})").patch.strategy ==
          Strategy::proportional);

    auto field_of = [](const char* text) {
        try {
            parse_wire_command(text);
        } catch (const Error& e) {
            return e.field();
        }
        return std::string("<accepted>");
    };
    CHECK(field_of("{not json") == "message");
    CHECK(field_of("[1,2]") == "message");
    CHECK(field_of(R"({"type":"launch"})") == "type");
    CHECK(field_of(R"({"type":"set_config"})") == "patch");
    CHECK(field_of(R"({"type":"set_config","patch":{"th":"high"}})") == "th");
    CHECK(field_of(R"({"type":"set_config","patch":{"colour":1}})") == "colour");
}

TEST_CASE("handled messages produce ack or field-level error")
{
    Session s(live_options(), endless(1.0));
    auto ack = json::parse(handle_wire_message(s, R"({"type":"set_config","patch":{"th":30}})"));
    CHECK(ack["type"] == "ack");
    CHECK(ack["config"]["th"] == 30.0);

    auto err = json::parse(handle_wire_message(s, R"({"type":"set_config","patch":{"delta":60}})"));
    CHECK(err["type"] == "error");
    CHECK(err["field"] == "delta");
    CHECK(err.contains("msg"));

    auto bad = json::parse(handle_wire_message(s, "garbage"));
    CHECK(bad["type"] == "error");
}

TEST_CASE("outbound notices")
{
    TelemetryFrame f;
    f.t_ms = 40;
    f.emg_percent = 12.5;
    f.reference = 0.25;
    f.position = 0.125;
    auto t = json::parse(encode_notice(f));
    CHECK(t["type"] == "telemetry");
    CHECK(t["t_ms"] == 40);
    CHECK(t["reference"] == 0.25);
    CHECK(t["config"]["th"] == 50.0);

    auto st = json::parse(encode_notice(StateNotice{5, Phase::running, true, {}}));
    CHECK(st["type"] == "state");
    CHECK(st["phase"] == "running");

    auto er = json::parse(encode_notice(ErrorNotice{9, "calibration", "mvc too low"}));
    CHECK(er["type"] == "error");
    CHECK(er["field"] == "calibration");
    CHECK(er["msg"] == "mvc too low");
}

TEST_CASE("endpoint parsing")
{
    CHECK(parse_endpoint("127.0.0.1:8765") == std::pair<std::string, std::uint16_t>{"127.0.0.1", 8765});
    CHECK_THROWS_AS(parse_endpoint("localhost"), Error);
    CHECK_THROWS_AS(parse_endpoint("host:99999"), Error);
}

TEST_CASE("websocket clients command a live session and receive telemetry")
{
    namespace asio = boost::asio;
    namespace beast = boost::beast;
    namespace websocket = beast::websocket;
    using tcp = asio::ip::tcp;

    SessionOptions o = live_options();
    o.paced = true;
    Session session(o, endless(2.0));
    WireServer server(session, "127.0.0.1", 0);
    REQUIRE(server.port() != 0);
    std::thread runner([&] { session.run(-1); });

    asio::io_context ioc;
    websocket::stream<tcp::socket> ws(ioc);
    tcp::resolver resolver(ioc);
    asio::connect(ws.next_layer(), resolver.resolve("127.0.0.1", std::to_string(server.port())));
    ws.handshake("127.0.0.1", "/");

    auto read_json = [&] {
        beast::flat_buffer buf;
        ws.read(buf);
        return json::parse(beast::buffers_to_string(buf.data()));
    };
    auto read_until = [&](auto pred) {
        for (int i = 0; i < 5000; ++i) {
            auto j = read_json();
            if (pred(j))
                return j;
        }
        FAIL("message not seen");
        return json{};
    };

    auto state = read_json();
    CHECK(state["type"] == "state");

    const auto sent = std::chrono::steady_clock::now();
    ws.write(asio::buffer(std::string(R"({"type":"set_config","patch":{"th":30}})")));
    auto ack = read_until([](const json& j) { return j["type"] == "ack"; });
    CHECK(ack["config"]["th"] == 30.0);
    auto seen = read_until([](const json& j) { return j["type"] == "telemetry" && j["config"]["th"] == 30.0; });
    const auto elapsed = std::chrono::steady_clock::now() - sent;
    // 2.0 V is 40 %, above the new threshold
    CHECK(seen["reference"] == 1.0);
    CHECK(elapsed < std::chrono::milliseconds(1000));

    ws.write(asio::buffer(std::string(R"({"type":"set_config","patch":{"delta":60}})")));
    auto err = read_until([](const json& j) { return j["type"] == "error"; });
    CHECK(err["field"] == "delta");

    ws.write(asio::buffer(std::string(R"({"type":"stop"})")));
    auto idle = read_until([](const json& j) { return j["type"] == "state" && j["phase"] == "idle"; });
    CHECK(idle["calibrated"] == true);

    ws.close(websocket::close_code::normal);
    session.interrupt();
    runner.join();
    server.stop();

    const auto& rec = session.record();
    bool logged = false;
    for (const auto& e : rec.events)
        logged |= e.type == "set_config";
    CHECK(logged);
}
