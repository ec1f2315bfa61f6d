#include "myoctl/calibration.hpp"
#include "myoctl/emg_source.hpp"
#include "myoctl/errors.hpp"
#include "myoctl/session_record.hpp"
#include "support.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace myoctl;
using testing::read_file;
using testing::temp_path;
using testing::write_file;

namespace {

SessionRecord sample_record()
{
    SessionRecord rec;
    rec.header.seed = 18446744073709551615ull;
    rec.header.source = "sim:moderate";
    rec.header.profile = build_profile(61, 1402, 8000, 3000, 5000);
    rec.header.config.strategy = Strategy::proportional;
    rec.header.config.delta = 2.5;
    rec.header.plant.encoder_noise_sd = 0.001;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0, 1);
    for (int t = 0; t < 300; ++t) {
        SessionRow r;
        r.t_ms = t;
        r.volts = u(rng) * 5;
        r.raw = t * 13 % 4096;
        r.emg_percent = u(rng) * 100;
        r.x_percent = u(rng) * 100;
        r.reference = u(rng);
        r.position = t % 7 == 0 ? 0.0 : u(rng) * 1e-7;
        rec.rows.push_back(r);
    }
    rec.events = {{0, "session_start", "{}"},
                  {0, "start", "{}"},
                  {120, "set_config", R"({"patch":{"th":30.0}})"},
                  {299, "stop", "{}"},
                  {300, "end", R"({"ticks":300})"}};
    return rec;
}

ErrorCode import_code(const std::string& text, std::string* what = nullptr)
{
    const auto p = temp_path("bad.csv");
    write_file(p, text);
    try {
        import_csv(p);
    } catch (const Error& e) {
        if (what)
            *what = e.what();
        return e.code();
    }
    FAIL("import succeeded");
    return ErrorCode::contract;
}

const std::string kHeader = std::string(kSessionColumns) + "\n";

} // namespace

TEST_CASE("export then import gives an equal record")
{
    const auto rec = sample_record();
    const auto p = temp_path("roundtrip.csv");
    export_csv(rec, p);
    const auto back = import_csv(p);
    CHECK(back.header == rec.header);
    CHECK(back.rows == rec.rows);
    CHECK(back.events == rec.events);

    // writing the imported record again reproduces the file byte for byte
    std::ostringstream a, b;
    write_csv(rec, a);
    write_csv(back, b);
    CHECK(a.str() == b.str());
}

TEST_CASE("events precede the first row they affect")
{
    std::ostringstream out;
    write_csv(sample_record(), out);
    const auto text = out.str();
    const auto ev = text.find("#EVENT 120 set_config");
    const auto row = text.find("\n120,");
    REQUIRE(ev != std::string::npos);
    REQUIRE(row != std::string::npos);
    CHECK(ev < row);
    CHECK(text.find("\n119,") < ev);
}

TEST_CASE("header-only file gives an empty stream")
{
    const auto p = temp_path("empty.csv");
    write_file(p, "# version=1\n" + kHeader);
    SessionCsvReader reader(p);
    CHECK_FALSE(reader.next_row().has_value());
    CHECK_FALSE(reader.next_row().has_value());

    ReplaySource src(p);
    CHECK_FALSE(src.next().has_value());
}

TEST_CASE("non-numeric volts cell names its line")
{
    std::string text = kHeader; // line 1
    for (int t = 0; t < 5; ++t)  // lines 2-6
        text += std::to_string(t) + ",0.5,410,0,0,0,0\n";
    text += "5,abc,410,0,0,0,0\n"; // line 7
    std::string what;
    CHECK(import_code(text, &what) == ErrorCode::parse);
    CHECK(what.find("line 7") != std::string::npos);
    CHECK(what.find("volts") != std::string::npos);
}

TEST_CASE("truncated final row names its row index")
{
    std::string text = "# version=1\n" + kHeader + "0,0.5,410,0,0,0,0\n1,0.5,410,0,0,0,0\n2,0.5,41";
    std::string what;
    CHECK(import_code(text, &what) == ErrorCode::parse);
    CHECK(what.find("row 2") != std::string::npos);

    std::string complete_fields = "# version=1\n" + kHeader + "0,0.5,410,0,0,0,0\n1,0.5,410,0,0,0,0";
    CHECK(import_code(complete_fields, &what) == ErrorCode::parse);
    CHECK(what.find("row 1") != std::string::npos);
}

TEST_CASE("future format version is refused")
{
    CHECK(import_code("# version=2\n" + kHeader) == ErrorCode::unsupported_version);
    CHECK(import_code("# version=x\n" + kHeader) == ErrorCode::parse);
}

TEST_CASE("missing columns are listed")
{
    std::string what;
    CHECK(import_code("# version=1\nt_ms,volts,raw,emg_percent,reference\n", &what) == ErrorCode::schema);
    CHECK(what.find("x_percent") != std::string::npos);
    CHECK(what.find("position") != std::string::npos);
    CHECK(import_code("# version=1\n") == ErrorCode::schema);
}

TEST_CASE("wrong field counts and bad preamble values")
{
    CHECK(import_code(kHeader + "0,0.5,410,0,0,0\n") == ErrorCode::parse);
    CHECK(import_code(kHeader + "0,0.5,410,0,0,0,0,9\n") == ErrorCode::parse);
    CHECK(import_code("# config={\"th\":\n" + kHeader) == ErrorCode::parse);
    CHECK(import_code("# config={\"delta\":70}\n" + kHeader) == ErrorCode::validation);
}

TEST_CASE("missing file")
{
    try {
        import_csv(temp_path("does_not_exist.csv"));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::io);
    }
}

TEST_CASE("replay yields the recorded volts sample for sample")
{
    const auto rec = sample_record();
    const auto p = temp_path("replay_src.csv");
    export_csv(rec, p);
    auto src = open_replay(p);
    CHECK(src->descriptor() == "sim:moderate");
    for (const auto& r : rec.rows)
        REQUIRE(*src->next() == r.volts);
    CHECK_FALSE(src->next().has_value());
}
