#pragma once

#include "myoctl/control.hpp"

#include <atomic>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace myoctl {

enum class Phase { idle, calibrating_rest, calibrating_mvc, running };

std::string_view to_string(Phase p) noexcept;

struct TelemetryFrame {
    std::int64_t t_ms = 0;
    double emg_percent = 0.0;
    double reference = 0.0;
    double position = 0.0;
    Phase phase = Phase::idle;
    ControlConfig config;
};

struct StateNotice {
    std::int64_t t_ms = 0;
    Phase phase = Phase::idle;
    bool calibrated = false;
    ControlConfig config;
};

// Asynchronous failure raised on the tick thread (e.g. a calibration that
// produced mvc <= rest).
struct ErrorNotice {
    std::int64_t t_ms = 0;
    std::string field;
    std::string message;
};

using Notice = std::variant<TelemetryFrame, StateNotice, ErrorNotice>;

// Bounded drop-oldest mailbox. The producer never waits on the consumer.
class Subscription {
public:
    explicit Subscription(std::size_t capacity);

    void push(Notice n);
    std::optional<Notice> poll();
    std::vector<Notice> drain();

    std::uint64_t dropped() const noexcept { return dropped_.load(std::memory_order_relaxed); }
    std::size_t capacity() const noexcept { return capacity_; }

private:
    std::size_t capacity_;
    std::mutex mu_;
    std::deque<Notice> queue_;
    std::atomic<std::uint64_t> dropped_{0};
};

class TelemetryHub {
public:
    std::shared_ptr<Subscription> subscribe(std::size_t capacity);
    void publish(const Notice& n);
    bool empty() const;

private:
    mutable std::mutex mu_;
    std::vector<std::weak_ptr<Subscription>> subs_;
};

} // namespace myoctl
