#include "myoctl/myoctl.h"

#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using nlohmann::json;

extern "C" int myoctl_c_header_check(void);

namespace {

std::string take(char* s)
{
    std::string out = s ? s : "";
    myoctl_free(s);
    return out;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kConfig = R"({
    "seed": 5,
    "patient": {"preset": "moderate"},
    "script": [[0, 2000, 0.0], [3000, 6000, 1.0], [7000, 9000, 0.5]],
    "control": {"strategy": "proportional"},
    "calibration": {"capture": true, "rest_window_ms": 2000, "mvc_window_ms": 3000}
})";

} // namespace

TEST_CASE("header compiles as C")
{
    CHECK(myoctl_c_header_check() == 0);
}

TEST_CASE("primitives")
{
    int raw = -1;
    CHECK(myoctl_quantize(2.5, &raw) == MYOCTL_OK);
    CHECK(raw == 2048);
    CHECK(myoctl_quantize(6.0, &raw) == MYOCTL_ERR_CONTRACT);
    CHECK(std::string(myoctl_last_error()).size() > 0);

    double pct = -1;
    CHECK(myoctl_normalize(1050, 100, 2000, &pct) == MYOCTL_OK);
    CHECK(pct == 50.0);
    CHECK(myoctl_normalize(10, 500, 500, &pct) == MYOCTL_ERR_CALIBRATION_REQUIRED);

    CHECK(myoctl_onoff_step(50, 50) == 0.0);
    CHECK(myoctl_onoff_step(60, 50) == 1.0);
    CHECK(myoctl_proportional_map(80, 20, 80, 1) == 80.0);
    CHECK(myoctl_deadband_step(0, 6, 5) == 1.0);
    CHECK(myoctl_rescale(50, 5) == 0.5);
    CHECK(std::string(myoctl_status_name(MYOCTL_ERR_PARSE)) == "parse");
    CHECK(myoctl_version() != nullptr);
}

TEST_CASE("engine lifecycle through the C interface")
{
    myoctl_engine* e = nullptr;
    REQUIRE(myoctl_engine_create(kConfig, &e) == MYOCTL_OK);
    REQUIRE(e != nullptr);
    CHECK(myoctl_engine_run(e, 100) == MYOCTL_ERR_STATE); // no source yet
    REQUIRE(myoctl_engine_open_sim(e) == MYOCTL_OK);

    myoctl_subscription* sub = nullptr;
    REQUIRE(myoctl_engine_subscribe(e, 4096, &sub) == MYOCTL_OK);

    char* reply = nullptr;
    CHECK(myoctl_engine_command(e, R"({"type":"set_config","patch":{"delta":60}})", &reply) ==
          MYOCTL_ERR_VALIDATION);
    CHECK(std::string(myoctl_last_error_field()) == "delta");
    auto r = json::parse(take(reply));
    CHECK(r["type"] == "error");
    CHECK(r["field"] == "delta");

    REQUIRE(myoctl_engine_command(e, R"({"type":"set_config","patch":{"delta":3}})", &reply) == MYOCTL_OK);
    CHECK(json::parse(take(reply))["type"] == "ack");

    REQUIRE(myoctl_engine_run(e, 10000) == MYOCTL_OK);
    CHECK(myoctl_engine_row_count(e) == 10000);
    myoctl_tick_stats st{};
    CHECK(myoctl_engine_stats(e, &st) == MYOCTL_OK);
    CHECK(st.ticks == 10000);

    int frames = 0;
    char* msg = nullptr;
    while (myoctl_subscription_poll(sub, &msg)) {
        if (json::parse(take(msg))["type"] == "telemetry")
            ++frames;
    }
    CHECK(frames == 500);
    CHECK(myoctl_subscription_dropped(sub) == 0);
    myoctl_subscription_destroy(sub);

    const auto path = std::filesystem::temp_directory_path() / "myoctl_capi_a.csv";
    REQUIRE(myoctl_engine_export_csv(e, path.string().c_str()) == MYOCTL_OK);
    myoctl_engine_destroy(e);

    // replay reproduces the export byte for byte
    myoctl_engine* r2 = nullptr;
    REQUIRE(myoctl_engine_create("{}", &r2) == MYOCTL_OK);
    REQUIRE(myoctl_engine_open_replay(r2, path.string().c_str()) == MYOCTL_OK);
    REQUIRE(myoctl_engine_run(r2, -1) == MYOCTL_OK);
    const auto path2 = std::filesystem::temp_directory_path() / "myoctl_capi_b.csv";
    REQUIRE(myoctl_engine_export_csv(r2, path2.string().c_str()) == MYOCTL_OK);
    myoctl_engine_destroy(r2);
    CHECK(slurp(path) == slurp(path2));

    char* metrics = nullptr;
    REQUIRE(myoctl_analyze_file(path.string().c_str(), nullptr, 0.8, &metrics) == MYOCTL_OK);
    auto m = json::parse(take(metrics));
    CHECK(m["reference_transition_count"].get<int>() > 0);
}

TEST_CASE("errors carry status, message and field")
{
    myoctl_engine* e = nullptr;
    CHECK(myoctl_engine_create(R"({"control": {"th1": 90, "th2": 10}})", &e) == MYOCTL_ERR_VALIDATION);
    CHECK(e == nullptr);
    CHECK(std::string(myoctl_last_error_field()) == "th1");
    CHECK(myoctl_engine_create("{", &e) == MYOCTL_ERR_PARSE);
    CHECK(myoctl_engine_create("{}", nullptr) == MYOCTL_ERR_INVALID_ARGUMENT);
    REQUIRE(myoctl_engine_create(nullptr, &e) == MYOCTL_OK); // defaults
    myoctl_engine_destroy(e);
    e = nullptr;
    CHECK(myoctl_engine_load("/nonexistent/config.json", &e) == MYOCTL_ERR_IO);

    REQUIRE(myoctl_engine_create("{}", &e) == MYOCTL_OK);
    CHECK(myoctl_engine_open_replay(e, "/nonexistent.csv") == MYOCTL_ERR_IO);
    CHECK(myoctl_engine_set_model(e, "/nonexistent/patient.json") == MYOCTL_ERR_IO);
    // default options auto-start without a profile
    REQUIRE(myoctl_engine_open_sim(e) == MYOCTL_OK);
    CHECK(myoctl_engine_run(e, 10) == MYOCTL_ERR_CALIBRATION_REQUIRED);
    myoctl_engine_destroy(e);
    myoctl_engine_destroy(nullptr);
}
