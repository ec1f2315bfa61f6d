#include "myoctl/hand_plant.hpp"

#include "myoctl/errors.hpp"

#include <algorithm>
#include <cmath>

namespace myoctl {

void validate(const PlantParams& p)
{
    if (!(std::isfinite(p.max_rate) && p.max_rate > 0.0))
        throw Error(ErrorCode::validation, "max_rate must be positive", "max_rate");
    if (!std::isfinite(p.close_max_rate))
        throw Error(ErrorCode::validation, "close_max_rate must be finite", "close_max_rate");
    if (!(std::isfinite(p.time_constant_ms) && p.time_constant_ms > 0.0))
        throw Error(ErrorCode::validation, "time_constant must be positive", "time_constant_ms");
    if (!(std::isfinite(p.encoder_noise_sd) && p.encoder_noise_sd >= 0.0))
        throw Error(ErrorCode::validation, "encoder_noise_sd must be non-negative", "encoder_noise_sd");
}

HandState plant_step(const HandState& state, double reference, double dt_ms, const PlantParams& params)
{
    if (!(dt_ms > 0.0))
        throw Error(ErrorCode::contract, "plant step needs dt > 0");
    reference = std::clamp(reference, 0.0, 1.0);

    // Exact discretization of the lag, so the position cannot overshoot.
    const double decay = std::exp(-dt_ms / params.time_constant_ms);
    const double lagged = reference + (state.position - reference) * decay;

    const double dt_s = dt_ms / 1000.0;
    const double up = params.max_rate * dt_s;
    const double down = params.closing_rate() * dt_s;
    const double move = std::clamp(lagged - state.position, -down, up);

    HandState next;
    next.reference = reference;
    next.position = std::clamp(state.position + move, 0.0, 1.0);
    next.velocity = (next.position - state.position) / dt_s;
    return next;
}

double Encoder::read(const HandState& state, const PlantParams& params)
{
    if (params.encoder_noise_sd <= 0.0)
        return std::clamp(state.position, 0.0, 1.0);
    return std::clamp(state.position + params.encoder_noise_sd * noise_(rng_), 0.0, 1.0);
}

double encoder_read(const HandState& state, const PlantParams& params, std::uint64_t seed)
{
    Encoder enc(seed);
    return enc.read(state, params);
}

} // namespace myoctl
