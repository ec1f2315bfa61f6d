#pragma once

#include <cstdint>
#include <random>

namespace myoctl {

struct PlantParams {
    double max_rate = 1.0;        // aperture fraction per second (opening)
    double close_max_rate = 0.0;  // closing slew limit; <= 0 means same as max_rate
    double time_constant_ms = 80.0;
    double encoder_noise_sd = 0.0;

    double closing_rate() const noexcept { return close_max_rate > 0.0 ? close_max_rate : max_rate; }
    friend bool operator==(const PlantParams&, const PlantParams&) = default;
};

void validate(const PlantParams& params);

struct HandState {
    double position = 0.0;  // aperture fraction
    double velocity = 0.0;  // aperture fraction per second
    double reference = 0.0;
    friend bool operator==(const HandState&, const HandState&) = default;
};

/// First-order lag towards the reference, slew limited, clamped to [0, 1].
HandState plant_step(const HandState& state, double reference, double dt_ms, const PlantParams& params);

// Simulated magnetic encoder. Readings are position plus Gaussian noise.
class Encoder {
public:
    explicit Encoder(std::uint64_t seed) : rng_(seed) {}
    double read(const HandState& state, const PlantParams& params);

private:
    std::mt19937_64 rng_;
    std::normal_distribution<double> noise_{0.0, 1.0};
};

double encoder_read(const HandState& state, const PlantParams& params, std::uint64_t seed);

} // namespace myoctl
