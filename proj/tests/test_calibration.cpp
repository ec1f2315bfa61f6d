#include "myoctl/calibration.hpp"
#include "myoctl/errors.hpp"
#include "myoctl/signal_pipeline.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>
#include <vector>

using namespace myoctl;

namespace {

ErrorCode code_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::contract;
}

} // namespace

TEST_CASE("rest capture")
{
    std::vector<int> flat(1000, 100);
    CHECK(capture_rest(flat) == 100);

    std::vector<int> sym;
    for (int i = 0; i < 250; ++i)
        sym.insert(sym.end(), {100, 102, 98, 100});
    CHECK(capture_rest(sym) == 100);

    std::vector<int> short_window(999, 100);
    CHECK(code_of([&] { capture_rest(short_window); }) == ErrorCode::insufficient_data);
}

TEST_CASE("mvc capture")
{
    std::vector<int> flat(1500, 3000);
    CHECK(capture_mvc(flat) == 3000);

    std::vector<int> spike(1000, 0);
    spike[417] = 4095;
    CHECK(capture_mvc(spike) == oracle::percentile_rounded(spike, 95));
    CHECK(capture_mvc(spike) == 0);

    std::vector<int> short_window(10, 3000);
    CHECK(code_of([&] { capture_mvc(short_window); }) == ErrorCode::insufficient_data);
}

TEST_CASE("mvc capture matches the enumerated percentile")
{
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> u(0, 4095);
    for (int trial = 0; trial < 400; ++trial) {
        std::vector<int> w(1000 + trial * 7);
        for (auto& v : w)
            v = u(rng);
        CHECK(capture_mvc(w) == oracle::percentile_rounded(w, 95));
    }
}

TEST_CASE("profile construction")
{
    CHECK(code_of([] { build_profile(500, 500); }) == ErrorCode::invalid_calibration);
    CHECK(code_of([] { build_profile(600, 500); }) == ErrorCode::invalid_calibration);
    const auto p = build_profile(100, 2000, 8000, 3000, 5000);
    CHECK(p.valid());
    CHECK(p.captured_at == 8000);
    CHECK(initial_threshold(p) == 50.0);
    // the 50 % threshold sits at raw 1050, the midpoint of the raw range
    CHECK(normalize(1050, p) == initial_threshold(p));
}

TEST_CASE("anchors hold for every valid profile")
{
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> u(0, 4095);
    for (int i = 0; i < 5000; ++i) {
        int a = u(rng), b = u(rng);
        if (a == b)
            continue;
        if (a > b)
            std::swap(a, b);
        const auto p = build_profile(a, b);
        CHECK(std::abs(normalize(a, p)) <= 1e-9);
        CHECK(std::abs(normalize(b, p) - 100.0) <= 1e-9);
        CHECK(initial_threshold(p) == 50.0);
    }
}
