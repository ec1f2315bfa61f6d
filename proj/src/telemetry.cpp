#include "myoctl/telemetry.hpp"

#include <algorithm>

namespace myoctl {

std::string_view to_string(Phase p) noexcept
{
    switch (p) {
    case Phase::idle: return "idle";
    case Phase::calibrating_rest: return "calibrating_rest";
    case Phase::calibrating_mvc: return "calibrating_mvc";
    case Phase::running: return "running";
    }
    return "idle";
}

Subscription::Subscription(std::size_t capacity)
    : capacity_(std::max<std::size_t>(capacity, 1))
{
}

void Subscription::push(Notice n)
{
    std::lock_guard lock(mu_);
    if (queue_.size() >= capacity_) {
        queue_.pop_front();
        dropped_.fetch_add(1, std::memory_order_relaxed);
    }
    queue_.push_back(std::move(n));
}

std::optional<Notice> Subscription::poll()
{
    std::lock_guard lock(mu_);
    if (queue_.empty())
        return std::nullopt;
    Notice n = std::move(queue_.front());
    queue_.pop_front();
    return n;
}

std::vector<Notice> Subscription::drain()
{
    std::deque<Notice> taken;
    {
        std::lock_guard lock(mu_);
        taken.swap(queue_);
    }
    return {std::make_move_iterator(taken.begin()), std::make_move_iterator(taken.end())};
}

std::shared_ptr<Subscription> TelemetryHub::subscribe(std::size_t capacity)
{
    auto sub = std::make_shared<Subscription>(capacity);
    std::lock_guard lock(mu_);
    subs_.push_back(sub);
    return sub;
}

void TelemetryHub::publish(const Notice& n)
{
    std::lock_guard lock(mu_);
    auto it = subs_.begin();
    while (it != subs_.end()) {
        if (auto sub = it->lock()) {
            sub->push(n);
            ++it;
        } else {
            it = subs_.erase(it);
        }
    }
}

bool TelemetryHub::empty() const
{
    std::lock_guard lock(mu_);
    return subs_.empty();
}

} // namespace myoctl
