#pragma once

#include "myoctl/calibration.hpp"
#include "myoctl/control.hpp"
#include "myoctl/emg_source.hpp"
#include "myoctl/errors.hpp"
#include "myoctl/hand_plant.hpp"
#include "myoctl/session_record.hpp"
#include "myoctl/signal_pipeline.hpp"
#include "myoctl/telemetry.hpp"

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace myoctl {

// Partial ControlConfig update; unset members keep their current value.
struct ConfigPatch {
    std::optional<Strategy> strategy;
    std::optional<double> th;
    std::optional<double> th1;
    std::optional<double> th2;
    std::optional<double> delta;
    std::optional<double> hysteresis_gap;
    std::optional<bool> literal_map;

    ControlConfig applied_to(ControlConfig cfg) const;
    bool empty() const noexcept;
    friend bool operator==(const ConfigPatch&, const ConfigPatch&) = default;
};

enum class CommandType { set_config, set_strategy, calibrate_rest, calibrate_mvc, start, stop };

std::string_view to_string(CommandType t) noexcept;
std::optional<CommandType> parse_command_type(std::string_view s) noexcept;

struct Command {
    CommandType type = CommandType::start;
    ConfigPatch patch; // set_config and set_strategy only
};

struct CommandReply {
    bool ok = true;
    ControlConfig config; // config that will be active once the command latches
    Phase phase = Phase::idle;
    ErrorCode code = ErrorCode::validation;
    std::string field;
    std::string message;
};

struct SessionOptions {
    ControlConfig control;
    PlantParams plant;
    std::size_t average_window = kDefaultAverageWindow;
    std::uint64_t seed = 0;
    std::optional<CalibrationProfile> profile;
    CaptureSettings capture;
    bool auto_calibrate = false; // rest, then MVC, then start, driven from t = 0
    bool auto_start = true;      // enter control at t = 0 (requires a profile)
    std::size_t telemetry_decimation = 20;
    bool paced = false;          // pace ticks to the wall clock
};

struct TickStats {
    std::int64_t ticks = 0;
    double max_late_ms = 0.0; // paced runs only
    std::int64_t late_ticks = 0; // ticks more than 2 ms behind schedule
};

// Owns the whole control chain: source -> pipeline -> controller -> plant.
// run() is the tick thread; handle_command() and subscribe() may be called
// from any thread, before or during run().
class Session {
public:
    Session(SessionOptions options, std::unique_ptr<SampleSource> source);
    ~Session();

    Session(const Session&) = delete;
    Session& operator=(const Session&) = delete;

    CommandReply handle_command(const Command& cmd);

    // Issue `cmd` at the start of tick t_ms (replay and scripted calibration).
    void schedule(std::int64_t t_ms, Command cmd);

    std::shared_ptr<Subscription> subscribe(std::size_t capacity = 256);

    // Runs for duration_ms ticks (negative: until the source ends or interrupt()).
    // Throws Error(calibration_required) if auto_start is set without any way
    // to obtain a profile.
    const SessionRecord& run(std::int64_t duration_ms);
    void interrupt() noexcept { interrupted_.store(true); }

    const SessionRecord& record() const noexcept { return record_; }
    SessionRecord take_record() { return std::move(record_); }

    Phase phase() const;
    ControlConfig config() const;
    std::optional<CalibrationProfile> profile() const;
    StateNotice state() const;
    TickStats stats() const;
    const SessionOptions& options() const noexcept { return options_; }

private:
    struct Plane {
        ControlConfig config;
        std::optional<CalibrationProfile> profile;
        Phase phase = Phase::idle;
        bool rest_ready = false;
        bool profile_ready = false;
    };

    CommandReply reject(ErrorCode code, std::string field, std::string msg) const;
    void latch_commands(std::int64_t t);
    void apply(const Command& cmd, std::int64_t t);
    void finish_capture(std::int64_t t);
    void log_event(std::int64_t t, std::string type, std::string payload = "{}");
    void publish_state(std::int64_t t);
    void tick(std::int64_t t, double volts);

    SessionOptions options_;
    std::unique_ptr<SampleSource> source_;
    ReplaySource* replay_ = nullptr;

    // control plane
    mutable std::mutex mu_;
    Plane plane_;
    std::vector<Command> queue_;
    std::vector<std::string> rejected_; // payloads of refused commands, logged at the next latch
    std::atomic<bool> pending_{false};
    std::multimap<std::int64_t, Command> scheduled_;

    // tick-thread state
    Phase phase_ = Phase::idle;
    std::optional<CalibrationProfile> profile_;
    std::optional<int> rest_raw_;
    std::vector<int> capture_;
    std::int64_t capture_started_ = 0;
    SignalPipeline pipeline_;
    Controller controller_;
    HandState hand_;
    Encoder encoder_;
    ControlConfig active_;
    SessionRecord record_;
    std::vector<SessionEvent> replayed_notes_;
    TelemetryHub hub_;
    std::atomic<bool> running_{false};
    std::atomic<bool> interrupted_{false};
    std::atomic<std::int64_t> now_{0};
    std::atomic<std::int64_t> ticks_{0};
    TickStats stats_; // pacing figures, guarded by mu_
};

/// Batch convenience: builds a Session and runs it.
SessionRecord run_session(const SessionOptions& options, std::unique_ptr<SampleSource> source,
                          std::int64_t duration_ms);

/// Re-runs a recorded session from its file: volts, header and command events
/// come from the recording.
SessionRecord replay_session(const std::filesystem::path& path, std::int64_t duration_ms = -1);

SessionOptions replay_options(const SessionHeader& header);

} // namespace myoctl
