#include "myoctl/calibration.hpp"
#include "myoctl/errors.hpp"
#include "myoctl/signal_pipeline.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace myoctl;

TEST_CASE("quantize maps the 0-5 V envelope onto 12 bits")
{
    CHECK(quantize(0.0) == 0);
    CHECK(quantize(5.0) == 4095);
    // 2.5 / 5 * 4095 = 2047.5 exactly; half rounds up
    CHECK(quantize(2.5) == 2048);
    CHECK_THROWS_AS(quantize(-0.001), Error);
    CHECK_THROWS_AS(quantize(5.001), Error);
    try {
        quantize(7.0);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::contract);
    }
}

TEST_CASE("quantize/dequantize error stays within half an LSB")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    const double half_lsb = 5.0 / 4095.0 / 2.0;
    for (int i = 0; i < 20000; ++i) {
        const double v = u(rng);
        CHECK(std::abs(dequantize(quantize(v)) - v) <= half_lsb + 1e-15);
    }
}

TEST_CASE("normalize anchors, linearity and clamping")
{
    const auto p = build_profile(100, 2000);
    CHECK(normalize(100, p) == 0.0);
    CHECK(normalize(2000, p) == 100.0);
    CHECK(normalize(1050, p) == 50.0);
    CHECK(normalize(3000, p) == 100.0);
    CHECK(normalize(0, p) == 0.0);

    CalibrationProfile bad;
    bad.rest_raw = 500;
    bad.mvc_raw = 500;
    try {
        normalize(10, bad);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::calibration_required);
    }
}

TEST_CASE("normalize is monotone in raw")
{
    const auto p = build_profile(37, 3111);
    double prev = -1.0;
    for (int raw = 0; raw <= 4095; ++raw) {
        const double v = normalize(raw, p);
        CHECK(v >= prev);
        CHECK(v >= 0.0);
        CHECK(v <= 100.0);
        prev = v;
    }
}

TEST_CASE("moving average examples")
{
    SUBCASE("constant input")
    {
        MovingAverage avg;
        double out = 0.0;
        for (int i = 0; i < 80; ++i)
            out = avg.step(0.1);
        CHECK(out == 0.1);
    }
    SUBCASE("step from a settled zero window")
    {
        MovingAverage avg;
        for (int i = 0; i < 50; ++i)
            avg.step(0.0);
        for (int k = 1; k <= 50; ++k)
            CHECK(avg.step(100.0) == 100.0 * k / 50.0);
    }
    SUBCASE("single spike in a full window")
    {
        MovingAverage avg;
        for (int i = 0; i < 49; ++i)
            avg.step(0.0);
        CHECK(avg.step(100.0) == 2.0);
    }
    SUBCASE("warm-up uses the partial window")
    {
        MovingAverage avg;
        CHECK(avg.step(10.0) == 10.0);
        CHECK(avg.step(20.0) == 15.0);
        CHECK(avg.count() == 2);
    }
}

TEST_CASE("moving average agrees with re-summed windows and stays within window bounds")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    for (std::size_t window : {1u, 7u, 50u}) {
        std::vector<double> xs(600);
        for (auto& x : xs)
            x = u(rng);
        const auto expected = oracle::windowed_mean(xs, window);
        MovingAverage avg(window);
        for (std::size_t k = 0; k < xs.size(); ++k) {
            const double got = avg.step(xs[k]);
            CHECK(got == doctest::Approx(expected[k]).epsilon(1e-12));
            const std::size_t begin = k + 1 >= window ? k + 1 - window : 0;
            const auto [lo, hi] = std::minmax_element(xs.begin() + begin, xs.begin() + k + 1);
            CHECK(got >= *lo);
            CHECK(got <= *hi);
        }
    }
}

TEST_CASE("pipeline output is bounded and causal")
{
    const auto profile = build_profile(200, 3000);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    std::vector<double> volts(500);
    for (auto& v : volts)
        v = u(rng);

    SignalPipeline a;
    std::vector<double> first;
    for (double v : volts) {
        const auto out = a.step(v, profile);
        CHECK(out.emg_percent >= 0.0);
        CHECK(out.emg_percent <= 100.0);
        first.push_back(out.emg_percent);
    }
    // Changing the future must not change the past.
    auto altered = volts;
    for (std::size_t i = 250; i < altered.size(); ++i)
        altered[i] = 5.0 - altered[i];
    SignalPipeline b;
    for (std::size_t i = 0; i < 250; ++i)
        CHECK(b.step(altered[i], profile).emg_percent == first[i]);
}
