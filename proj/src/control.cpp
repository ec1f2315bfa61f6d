#include "myoctl/control.hpp"

#include "myoctl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace myoctl {

std::string_view to_string(Strategy s) noexcept
{
    return s == Strategy::on_off ? "on_off" : "proportional";
}

std::optional<Strategy> parse_strategy(std::string_view s) noexcept
{
    if (s == "on_off" || s == "onoff" || s == "OnOff")
        return Strategy::on_off;
    if (s == "proportional" || s == "Proportional")
        return Strategy::proportional;
    return std::nullopt;
}

namespace {

void require(bool ok, const char* field, const std::string& msg)
{
    if (!ok)
        throw Error(ErrorCode::validation, msg, field);
}

bool finite(double v) { return std::isfinite(v); }

} // namespace

void validate(const ControlConfig& c)
{
    require(finite(c.th) && c.th >= 0.0 && c.th <= 100.0, "th", "th must lie in [0, 100]");
    require(finite(c.th1) && c.th1 >= 0.0 && c.th1 <= 100.0, "th1", "th1 must lie in [0, 100]");
    require(finite(c.th2) && c.th2 >= 0.0 && c.th2 <= 100.0, "th2", "th2 must lie in [0, 100]");
    require(c.th1 < c.th2, "th1", "th1 must be below th2");
    require(finite(c.delta) && c.delta >= 0.0 && c.delta < 50.0, "delta", "delta must lie in [0, 50)");
    require(finite(c.hysteresis_gap) && c.hysteresis_gap >= 0.0, "hysteresis_gap",
            "hysteresis_gap must be non-negative");
    if (c.hysteresis_gap > 0.0) {
        const double half = c.hysteresis_gap / 2.0;
        require(c.th - half > 0.0 && c.th + half < 100.0, "hysteresis_gap",
                "hysteresis band th +/- gap/2 must stay inside (0, 100)");
    }
}

Reference onoff_step(double emg, double th) noexcept
{
    return {emg > th ? 1.0 : 0.0};
}

Reference onoff_hysteresis_step(double emg, double th, double gap, Reference prev) noexcept
{
    // At gap 0 the release edge would hold the hand open at emg == th.
    if (gap <= 0.0)
        return onoff_step(emg, th);
    const double half = gap / 2.0;
    if (prev.r < 0.5)
        return {emg > th + half ? 1.0 : 0.0};
    return {emg < th - half ? 0.0 : 1.0};
}

double proportional_map(double emg, double th1, double th2, bool literal) noexcept
{
    const double p = (emg - th1) / (th2 - th1);
    if (literal)
        return std::clamp(p * emg, 0.0, 100.0);
    return std::clamp(p, 0.0, 1.0) * 100.0;
}

DeadbandState deadband_step(DeadbandState state, double x, double delta) noexcept
{
    const double z = x - state.r;
    if (z < -delta)
        state.r = x + delta;
    else if (z > delta)
        state.r = x - delta;
    state.last_x = x;
    return state;
}

Reference rescale(double r, double delta) noexcept
{
    return {std::clamp((r - delta) / (100.0 - 2.0 * delta), 0.0, 1.0)};
}

Controller::Controller(const ControlConfig& cfg)
    : active_(cfg)
{
    validate(cfg);
}

void Controller::apply_config(const ControlConfig& cfg)
{
    validate(cfg);
    staged_ = cfg;
}

ControlOutput Controller::step(double emg)
{
    if (staged_) {
        active_ = *staged_;
        staged_.reset();
    }

    ControlOutput out;
    if (active_.strategy == Strategy::on_off) {
        out.reference = active_.hysteresis_gap > 0.0
            ? onoff_hysteresis_step(emg, active_.th, active_.hysteresis_gap, last_)
            : onoff_step(emg, active_.th);
        out.x_percent = out.reference.r * 100.0;
    } else {
        out.x_percent = proportional_map(emg, active_.th1, active_.th2, active_.literal_map);
        deadband_ = deadband_step(deadband_, out.x_percent, active_.delta);
        out.reference = rescale(deadband_.r, active_.delta);
    }
    last_ = out.reference;
    return out;
}

void Controller::reset() noexcept
{
    deadband_ = {};
    last_ = {};
}

} // namespace myoctl
