#include "myoctl/errors.hpp"
#include "myoctl/hand_plant.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace myoctl;

TEST_CASE("equilibrium is a fixed point")
{
    PlantParams p;
    for (double x : {0.0, 0.3, 1.0}) {
        HandState s{x, 0.0, x};
        const auto n = plant_step(s, x, 1.0, p);
        CHECK(n.position == x);
        CHECK(n.velocity == 0.0);
    }
}

TEST_CASE("saturated slew opens half the stroke in 500 ms at 1/s")
{
    PlantParams p;
    p.max_rate = 1.0;
    HandState s{};
    for (int i = 0; i < 500; ++i)
        s = plant_step(s, 1.0, 1.0, p);
    CHECK(s.position == doctest::Approx(oracle::slew_travel(1.0, 500.0)).epsilon(1e-12));
    CHECK(s.position == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("held reference settles within 1e-3")
{
    PlantParams p;
    HandState s{};
    const int settle = static_cast<int>(1000.0 / p.max_rate + 10 * p.time_constant_ms);
    for (int i = 0; i < settle; ++i)
        s = plant_step(s, 1.0, 1.0, p);
    CHECK(std::abs(s.position - 1.0) < 1e-3);
}

TEST_CASE("closing uses its own slew limit when set")
{
    PlantParams p;
    p.max_rate = 1.0;
    p.close_max_rate = 2.0;
    HandState s{1.0, 0.0, 1.0};
    for (int i = 0; i < 100; ++i)
        s = plant_step(s, 0.0, 1.0, p);
    CHECK(s.position == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("position stays in [0, 1] and moves toward the reference")
{
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-0.5, 1.5);
    PlantParams p;
    p.time_constant_ms = 20;
    p.max_rate = 5;
    HandState s{};
    for (int i = 0; i < 50000; ++i) {
        const double ref = u(rng);
        const auto n = plant_step(s, ref, 1.0, p);
        REQUIRE(n.position >= 0.0);
        REQUIRE(n.position <= 1.0);
        const double target = std::clamp(ref, 0.0, 1.0);
        // never overshoots the reference
        REQUIRE(std::abs(n.position - target) <= std::abs(s.position - target) + 1e-15);
        s = n;
    }
}

TEST_CASE("invalid parameters and steps")
{
    PlantParams p;
    p.max_rate = 0;
    CHECK_THROWS_AS(validate(p), Error);
    p = {};
    p.time_constant_ms = -1;
    CHECK_THROWS_AS(validate(p), Error);
    p = {};
    p.encoder_noise_sd = -0.1;
    CHECK_THROWS_AS(validate(p), Error);
    CHECK_THROWS_AS(plant_step({}, 0.5, 0.0, PlantParams{}), Error);
}

TEST_CASE("encoder")
{
    PlantParams p;
    HandState s{0.42, 0.0, 0.42};
    CHECK(encoder_read(s, p, 1) == 0.42);

    p.encoder_noise_sd = 0.5;
    HandState closed{};
    Encoder enc(77);
    for (int i = 0; i < 1000; ++i) {
        const double v = enc.read(closed, p);
        REQUIRE(v >= 0.0);
        REQUIRE(v <= 1.0);
    }
    CHECK(encoder_read(s, p, 9) == encoder_read(s, p, 9));
    CHECK(encoder_read(s, p, 9) != encoder_read(s, p, 10));
}
