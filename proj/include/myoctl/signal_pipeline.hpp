#pragma once

#include <cstdint>
#include <vector>

namespace myoctl {

struct CalibrationProfile;

inline constexpr double kFullScaleVolts = 5.0;
inline constexpr int kAdcMax = 4095; // 12-bit converter
inline constexpr int kSampleRateHz = 1000;
inline constexpr std::size_t kDefaultAverageWindow = 50;

// One conditioned electrode reading.
struct EmgSample {
    std::int64_t t_ms = 0;
    double volts = 0.0;
    int raw = 0;
};

struct SmoothedSignal {
    std::int64_t t_ms = 0;
    double value = 0.0; // percent of calibrated dynamic range
};

/// Maps an envelope voltage in [0, 5] V onto a 12-bit count, rounding half up.
/// Throws Error(contract) for voltages outside the converter range.
int quantize(double volts);

/// Centre voltage of a count; inverse of quantize to within half an LSB.
double dequantize(int raw) noexcept;

/// Percent of the calibrated range, clamped to [0, 100].
/// Throws Error(calibration_required) if the profile is not valid.
double normalize(int raw, const CalibrationProfile& profile);

// Arithmetic mean over the most recent `window` inputs. Before the window has
// filled, the mean is taken over the samples seen so far.
class MovingAverage {
public:
    explicit MovingAverage(std::size_t window = kDefaultAverageWindow);

    double step(double value);
    void reset();

    std::size_t window() const noexcept { return buf_.size(); }
    std::size_t count() const noexcept { return filled_; }

private:
    std::vector<double> buf_;
    std::size_t head_ = 0;
    std::size_t filled_ = 0;
};

// quantize -> normalize -> moving average, one sample per call.
class SignalPipeline {
public:
    explicit SignalPipeline(std::size_t window = kDefaultAverageWindow) : average_(window) {}

    struct Output {
        int raw;
        double emg_percent;
    };

    // Requires a valid profile. The filter state is left untouched on error.
    Output step(double volts, const CalibrationProfile& profile);

    void reset() { average_.reset(); }
    const MovingAverage& average() const noexcept { return average_; }

private:
    MovingAverage average_;
};

} // namespace myoctl
