#pragma once

#include <optional>
#include <string_view>

namespace myoctl {

enum class Strategy { on_off, proportional };

std::string_view to_string(Strategy s) noexcept;
std::optional<Strategy> parse_strategy(std::string_view s) noexcept;

// All thresholds are percent of the calibrated dynamic range.
struct ControlConfig {
    Strategy strategy = Strategy::on_off;
    double th = 50.0;
    double th1 = 20.0;
    double th2 = 80.0;
    double delta = 5.0;
    double hysteresis_gap = 0.0; // 0 disables
    bool literal_map = false;    // r = p * emg instead of the clamped linear map

    friend bool operator==(const ControlConfig&, const ControlConfig&) = default;
};

/// Throws Error(validation) naming the first offending field.
void validate(const ControlConfig& cfg);

// Normalized aperture command, 0 = closed, 1 = open.
struct Reference {
    double r = 0.0;
    friend bool operator==(const Reference&, const Reference&) = default;
};

// Friction-style follower: `r` is the contact point dragged by the input `last_x`.
struct DeadbandState {
    double r = 0.0;
    double last_x = 0.0;
    friend bool operator==(const DeadbandState&, const DeadbandState&) = default;
};

Reference onoff_step(double emg, double th) noexcept;

/// Two-level switch centred on th. With gap == 0 this is onoff_step.
Reference onoff_hysteresis_step(double emg, double th, double gap, Reference prev) noexcept;

/// Percent point x fed to the deadband corrector.
double proportional_map(double emg, double th1, double th2, bool literal = false) noexcept;

/// Moves r only when x leaves the band [r - delta, r + delta], and then just
/// enough to put x back on the band edge.
DeadbandState deadband_step(DeadbandState state, double x, double delta) noexcept;

/// Stretches the follower's settled span [delta, 100 - delta] onto [0, 1].
Reference rescale(double r, double delta) noexcept;

struct ControlOutput {
    double x_percent = 0.0;
    Reference reference;
};

// Stateful strategy runner. Configuration changes are staged and adopted at the
// start of the next step; the deadband and hysteresis state carry across them.
class Controller {
public:
    explicit Controller(const ControlConfig& cfg = {});

    void apply_config(const ControlConfig& cfg); // validates, then stages
    ControlOutput step(double emg_percent);
    void reset() noexcept; // back to the closed-hand rest state

    const ControlConfig& config() const noexcept { return active_; }
    const DeadbandState& deadband() const noexcept { return deadband_; }
    Reference last_reference() const noexcept { return last_; }

private:
    ControlConfig active_;
    std::optional<ControlConfig> staged_;
    DeadbandState deadband_;
    Reference last_;
};

} // namespace myoctl
