#include "myoctl/signal_pipeline.hpp"

#include "myoctl/calibration.hpp"
#include "myoctl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace myoctl {

int quantize(double volts)
{
    if (!(volts >= 0.0 && volts <= kFullScaleVolts))
        throw Error(ErrorCode::contract, "envelope voltage outside [0, 5] V: " + std::to_string(volts));
    return static_cast<int>(std::floor(volts / kFullScaleVolts * kAdcMax + 0.5));
}

double dequantize(int raw) noexcept
{
    return static_cast<double>(raw) / kAdcMax * kFullScaleVolts;
}

double normalize(int raw, const CalibrationProfile& profile)
{
    if (!profile.valid())
        throw Error(ErrorCode::calibration_required, "normalization needs a valid calibration profile");
    const double span = profile.mvc_raw - profile.rest_raw;
    const double f = std::clamp((raw - profile.rest_raw) / span, 0.0, 1.0);
    return f * 100.0;
}

MovingAverage::MovingAverage(std::size_t window)
    : buf_(std::max<std::size_t>(window, 1), 0.0)
{
}

double MovingAverage::step(double value)
{
    buf_[head_] = value;
    head_ = (head_ + 1) % buf_.size();
    filled_ = std::min(filled_ + 1, buf_.size());

    // Direct sum: no drift from a running accumulator over long sessions.
    double sum = 0.0;
    double lo = value;
    double hi = value;
    for (std::size_t i = 0; i < filled_; ++i) {
        const double v = buf_[i];
        sum += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    // Rounding in the sum must not push the mean outside the window's range.
    return std::clamp(sum / static_cast<double>(filled_), lo, hi);
}

void MovingAverage::reset()
{
    std::fill(buf_.begin(), buf_.end(), 0.0);
    head_ = 0;
    filled_ = 0;
}

SignalPipeline::Output SignalPipeline::step(double volts, const CalibrationProfile& profile)
{
    const int raw = quantize(volts);
    const double percent = normalize(raw, profile);
    return {raw, average_.step(percent)};
}

} // namespace myoctl
