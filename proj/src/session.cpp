#include "myoctl/session.hpp"

#include "json_codec.hpp"
#include "myoctl/seed.hpp"

#include <algorithm>
#include <chrono>
#include <thread>

namespace myoctl {

ControlConfig ConfigPatch::applied_to(ControlConfig c) const
{
    if (strategy)
        c.strategy = *strategy;
    if (th)
        c.th = *th;
    if (th1)
        c.th1 = *th1;
    if (th2)
        c.th2 = *th2;
    if (delta)
        c.delta = *delta;
    if (hysteresis_gap)
        c.hysteresis_gap = *hysteresis_gap;
    if (literal_map)
        c.literal_map = *literal_map;
    return c;
}

bool ConfigPatch::empty() const noexcept
{
    return !strategy && !th && !th1 && !th2 && !delta && !hysteresis_gap && !literal_map;
}

std::string_view to_string(CommandType t) noexcept
{
    switch (t) {
    case CommandType::set_config: return "set_config";
    case CommandType::set_strategy: return "set_strategy";
    case CommandType::calibrate_rest: return "calibrate_rest";
    case CommandType::calibrate_mvc: return "calibrate_mvc";
    case CommandType::start: return "start";
    case CommandType::stop: return "stop";
    }
    return "start";
}

std::optional<CommandType> parse_command_type(std::string_view s) noexcept
{
    for (auto t : {CommandType::set_config, CommandType::set_strategy, CommandType::calibrate_rest,
                   CommandType::calibrate_mvc, CommandType::start, CommandType::stop})
        if (to_string(t) == s)
            return t;
    return std::nullopt;
}

Session::Session(SessionOptions options, std::unique_ptr<SampleSource> source)
    : options_(std::move(options))
    , source_(std::move(source))
    , pipeline_(options_.average_window)
    , controller_(options_.control)
    , encoder_(derive_seed(options_.seed, SeedStream::encoder))
{
    if (!source_)
        throw Error(ErrorCode::contract, "session needs a sample source");
    validate(options_.plant);
    if (options_.average_window == 0)
        throw Error(ErrorCode::validation, "average_window must be at least 1", "average_window");
    if (options_.telemetry_decimation == 0)
        throw Error(ErrorCode::validation, "telemetry decimation must be at least 1", "decimation");
    if (options_.profile && !options_.profile->valid())
        throw Error(ErrorCode::invalid_calibration, "initial calibration profile is invalid");

    replay_ = dynamic_cast<ReplaySource*>(source_.get());
    profile_ = options_.profile;
    if (profile_)
        rest_raw_ = profile_->rest_raw;
    plane_.config = options_.control;
    plane_.profile = profile_;
    plane_.profile_ready = profile_.has_value();
    plane_.rest_ready = profile_.has_value();
}

Session::~Session() = default;

CommandReply Session::reject(ErrorCode code, std::string field, std::string msg) const
{
    CommandReply r;
    r.ok = false;
    r.code = code;
    r.field = std::move(field);
    r.message = std::move(msg);
    r.config = plane_.config;
    r.phase = plane_.phase;
    return r;
}

CommandReply Session::handle_command(const Command& cmd)
{
    std::lock_guard lock(mu_);
    CommandReply reply = [&]() -> CommandReply {
        switch (cmd.type) {
        case CommandType::set_config:
        case CommandType::set_strategy: {
            if (cmd.type == CommandType::set_strategy && !cmd.patch.strategy)
                return reject(ErrorCode::validation, "strategy", "set_strategy needs a strategy");
            const ControlConfig merged = cmd.patch.applied_to(plane_.config);
            try {
                validate(merged);
            } catch (const Error& e) {
                return reject(e.code(), e.field(), e.what());
            }
            plane_.config = merged;
            break;
        }
        case CommandType::calibrate_rest:
            if (plane_.phase != Phase::idle)
                return reject(ErrorCode::state, "phase",
                              "calibration is only possible while idle (phase is " +
                                  std::string(to_string(plane_.phase)) + ")");
            plane_.phase = Phase::calibrating_rest;
            break;
        case CommandType::calibrate_mvc:
            if (plane_.phase != Phase::idle)
                return reject(ErrorCode::state, "phase",
                              "calibration is only possible while idle (phase is " +
                                  std::string(to_string(plane_.phase)) + ")");
            if (!plane_.rest_ready)
                return reject(ErrorCode::state, "phase", "rest calibration required before MVC capture");
            plane_.phase = Phase::calibrating_mvc;
            break;
        case CommandType::start:
            if (!plane_.profile_ready)
                return reject(ErrorCode::calibration_required, "phase", "calibration required");
            if (plane_.phase != Phase::idle)
                return reject(ErrorCode::state, "phase",
                              "cannot start while " + std::string(to_string(plane_.phase)));
            plane_.phase = Phase::running;
            break;
        case CommandType::stop:
            if (plane_.phase == Phase::idle)
                return reject(ErrorCode::state, "phase", "nothing to stop");
            plane_.phase = Phase::idle;
            break;
        }
        CommandReply ok;
        ok.config = plane_.config;
        ok.phase = plane_.phase;
        return ok;
    }();

    if (reply.ok) {
        queue_.push_back(cmd);
    } else {
        json payload{{"command", std::string(to_string(cmd.type))},
                     {"code", to_string(reply.code)},
                     {"field", reply.field},
                     {"msg", reply.message}};
        if (!cmd.patch.empty())
            payload["patch"] = to_json(cmd.patch);
        rejected_.push_back(payload.dump());
    }
    pending_.store(true, std::memory_order_release);
    return reply;
}

void Session::schedule(std::int64_t t_ms, Command cmd)
{
    std::lock_guard lock(mu_);
    scheduled_.emplace(t_ms, std::move(cmd));
}

std::shared_ptr<Subscription> Session::subscribe(std::size_t capacity)
{
    auto sub = hub_.subscribe(capacity);
    sub->push(state());
    return sub;
}

Phase Session::phase() const
{
    std::lock_guard lock(mu_);
    return plane_.phase;
}

ControlConfig Session::config() const
{
    std::lock_guard lock(mu_);
    return plane_.config;
}

std::optional<CalibrationProfile> Session::profile() const
{
    std::lock_guard lock(mu_);
    return plane_.profile;
}

StateNotice Session::state() const
{
    std::lock_guard lock(mu_);
    return StateNotice{now_.load(), plane_.phase, plane_.profile_ready, plane_.config};
}

TickStats Session::stats() const
{
    std::lock_guard lock(mu_);
    TickStats s = stats_;
    s.ticks = ticks_.load(std::memory_order_relaxed);
    return s;
}

void Session::log_event(std::int64_t t, std::string type, std::string payload)
{
    record_.events.push_back(SessionEvent{t, std::move(type), std::move(payload)});
}

void Session::publish_state(std::int64_t t)
{
    StateNotice n = state();
    n.t_ms = t;
    hub_.publish(n);
}

void Session::latch_commands(std::int64_t t)
{
    // Scheduled commands go through the same validation as live ones.
    for (;;) {
        Command cmd;
        {
            std::lock_guard lock(mu_);
            auto it = scheduled_.begin();
            if (it == scheduled_.end() || it->first > t)
                break;
            cmd = std::move(it->second);
            scheduled_.erase(it);
        }
        handle_command(cmd);
    }

    if (!pending_.exchange(false, std::memory_order_acq_rel))
        return;
    std::vector<Command> cmds;
    std::vector<std::string> rejected;
    {
        std::lock_guard lock(mu_);
        cmds.swap(queue_);
        rejected.swap(rejected_);
    }
    for (auto& r : rejected)
        log_event(t, "rejected", std::move(r));
    for (const auto& c : cmds)
        apply(c, t);
    if (!cmds.empty())
        publish_state(t);
}

void Session::apply(const Command& cmd, std::int64_t t)
{
    switch (cmd.type) {
    case CommandType::set_config:
    case CommandType::set_strategy: {
        active_ = cmd.patch.applied_to(active_);
        controller_.apply_config(active_);
        log_event(t, std::string(to_string(cmd.type)),
                  json{{"patch", to_json(cmd.patch)}, {"config", to_json(active_)}}.dump());
        return;
    }
    case CommandType::calibrate_rest:
        phase_ = Phase::calibrating_rest;
        break;
    case CommandType::calibrate_mvc:
        phase_ = Phase::calibrating_mvc;
        break;
    case CommandType::start:
        phase_ = Phase::running;
        controller_.reset();
        break;
    case CommandType::stop:
        phase_ = Phase::idle;
        break;
    }
    capture_.clear();
    capture_started_ = t;
    log_event(t, std::string(to_string(cmd.type)));
}

void Session::finish_capture(std::int64_t t)
{
    const bool rest = phase_ == Phase::calibrating_rest;
    const std::int64_t effective = t + 1;
    try {
        if (rest) {
            const int level = capture_rest(capture_, options_.capture.estimator);
            rest_raw_ = level;
            log_event(effective, "rest_captured", json{{"rest_raw", level}}.dump());
            std::lock_guard lock(mu_);
            plane_.rest_ready = true;
        } else {
            const int mvc = capture_mvc(capture_, options_.capture.estimator);
            if (!rest_raw_)
                throw Error(ErrorCode::state, "rest calibration required before MVC capture");
            const auto profile = build_profile(*rest_raw_, mvc, t, options_.capture.rest_window_ms,
                                               options_.capture.mvc_window_ms);
            profile_ = profile;
            log_event(effective, "calibration", to_json(profile).dump());
            std::lock_guard lock(mu_);
            plane_.profile = profile;
            plane_.profile_ready = true;
        }
    } catch (const Error& e) {
        log_event(effective, "calibration_error",
                  json{{"stage", rest ? "rest" : "mvc"}, {"code", to_string(e.code())}, {"msg", e.what()}}.dump());
        hub_.publish(ErrorNotice{effective, "calibration", e.what()});
    }

    phase_ = Phase::idle;
    capture_.clear();
    {
        std::lock_guard lock(mu_);
        const Phase capturing = rest ? Phase::calibrating_rest : Phase::calibrating_mvc;
        if (plane_.phase == capturing)
            plane_.phase = Phase::idle;
    }
    publish_state(effective);
}

void Session::tick(std::int64_t t, double volts)
{
    SessionRow row;
    row.t_ms = t;
    row.volts = volts;
    if (profile_) {
        const auto out = pipeline_.step(volts, *profile_);
        row.raw = out.raw;
        row.emg_percent = out.emg_percent;
    } else {
        row.raw = quantize(volts);
    }

    if (phase_ == Phase::calibrating_rest || phase_ == Phase::calibrating_mvc) {
        capture_.push_back(row.raw);
        const auto window = phase_ == Phase::calibrating_rest ? options_.capture.rest_window_ms
                                                              : options_.capture.mvc_window_ms;
        if (static_cast<std::int64_t>(capture_.size()) >= window)
            finish_capture(t);
    } else if (phase_ == Phase::running) {
        const auto out = controller_.step(row.emg_percent);
        row.x_percent = out.x_percent;
        row.reference = out.reference.r;
    }

    hand_ = plant_step(hand_, row.reference, 1.0, options_.plant);
    row.position = encoder_.read(hand_, options_.plant);
    record_.rows.push_back(row);

    if (t % static_cast<std::int64_t>(options_.telemetry_decimation) == 0 && !hub_.empty())
        hub_.publish(TelemetryFrame{t, row.emg_percent, row.reference, row.position, phase_, active_});
}

const SessionRecord& Session::run(std::int64_t duration_ms)
{
    if (running_.exchange(true))
        throw Error(ErrorCode::state, "session already ran");

    const auto& cap = options_.capture;
    if (options_.auto_calibrate) {
        schedule(0, Command{CommandType::calibrate_rest, {}});
        schedule(cap.rest_window_ms, Command{CommandType::calibrate_mvc, {}});
        if (options_.auto_start)
            schedule(cap.rest_window_ms + cap.mvc_window_ms, Command{CommandType::start, {}});
    } else if (options_.auto_start) {
        if (!profile_)
            throw Error(ErrorCode::calibration_required,
                        "calibration required: no profile and automatic calibration is off");
        schedule(0, Command{CommandType::start, {}});
    }

    active_ = options_.control;
    record_.header = SessionHeader{kSessionFormatVersion, options_.seed,       source_->descriptor(), profile_,
                                   options_.control,      options_.plant,      options_.average_window,
                                   options_.capture};
    if (duration_ms > 0)
        record_.rows.reserve(static_cast<std::size_t>(std::min<std::int64_t>(duration_ms, 50'000'000)));
    log_event(0, "session_start");

    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    std::int64_t t = 0;
    for (; duration_ms < 0 || t < duration_ms; ++t) {
        if (interrupted_.load(std::memory_order_relaxed))
            break;
        if (options_.paced) {
            const auto due = t0 + std::chrono::milliseconds(t);
            std::this_thread::sleep_until(due);
            const double late = std::chrono::duration<double, std::milli>(clock::now() - due).count();
            std::lock_guard lock(mu_);
            stats_.max_late_ms = std::max(stats_.max_late_ms, late);
            if (late > 2.0)
                ++stats_.late_ticks;
        }

        const auto volts = source_->next();
        if (!volts)
            break;
        if (replay_) {
            for (auto& e : replay_->reader().take_events()) {
                if (e.type == "rejected") {
                    replayed_notes_.push_back(std::move(e));
                    continue;
                }
                const auto type = parse_command_type(e.type);
                if (!type)
                    continue;
                Command cmd{*type, {}};
                if (*type == CommandType::set_config || *type == CommandType::set_strategy)
                    cmd.patch = patch_from_json(json::parse(e.payload).at("patch"));
                schedule(e.t_ms, std::move(cmd));
            }
        }
        now_.store(t, std::memory_order_relaxed);
        for (auto it = replayed_notes_.begin(); it != replayed_notes_.end();) {
            if (it->t_ms > t) {
                ++it;
                continue;
            }
            record_.events.push_back(std::move(*it));
            it = replayed_notes_.erase(it);
        }
        latch_commands(t);
        tick(t, *volts);
        ticks_.store(t + 1, std::memory_order_relaxed);
    }
    log_event(t, "end", json{{"ticks", t}}.dump());
    {
        std::lock_guard lock(mu_);
        plane_.phase = Phase::idle;
    }
    phase_ = Phase::idle;
    publish_state(t);
    return record_;
}

SessionRecord run_session(const SessionOptions& options, std::unique_ptr<SampleSource> source,
                          std::int64_t duration_ms)
{
    Session s(options, std::move(source));
    s.run(duration_ms);
    return s.take_record();
}

SessionOptions replay_options(const SessionHeader& h)
{
    SessionOptions o;
    o.control = h.config;
    o.plant = h.plant;
    o.average_window = h.average_window;
    o.seed = h.seed;
    o.profile = h.profile;
    o.capture = h.capture;
    o.auto_calibrate = false;
    o.auto_start = false; // the recorded start event drives control
    return o;
}

SessionRecord replay_session(const std::filesystem::path& path, std::int64_t duration_ms)
{
    auto src = open_replay(path);
    auto opts = replay_options(src->reader().header());
    return run_session(opts, std::move(src), duration_ms);
}

} // namespace myoctl
