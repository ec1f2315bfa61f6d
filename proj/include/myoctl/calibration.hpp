#pragma once

#include <cstdint>
#include <span>

namespace myoctl {

inline constexpr std::size_t kMinCaptureSamples = 1000;

struct CalibrationProfile {
    int rest_raw = 0;
    int mvc_raw = 0;
    std::int64_t captured_at = 0; // session milliseconds at which the capture finished
    std::int64_t rest_window_ms = 0;
    std::int64_t mvc_window_ms = 0;

    bool valid() const noexcept { return 0 <= rest_raw && rest_raw < mvc_raw && mvc_raw <= 4095; }
    friend bool operator==(const CalibrationProfile&, const CalibrationProfile&) = default;
};

struct CaptureOptions {
    std::size_t min_samples = kMinCaptureSamples;
    double mvc_percentile = 95.0;
    friend bool operator==(const CaptureOptions&, const CaptureOptions&) = default;
};

/// Window lengths used by command-driven calibration.
struct CaptureSettings {
    std::int64_t rest_window_ms = 3000;
    std::int64_t mvc_window_ms = 5000;
    CaptureOptions estimator;
    friend bool operator==(const CaptureSettings&, const CaptureSettings&) = default;
};

/// Rest level: mean of the window, rounded to the nearest count.
int capture_rest(std::span<const int> samples, const CaptureOptions& opts = {});

/// MVC level: a high percentile (linear interpolation between order statistics)
/// so a lone artifact sample cannot stretch the range.
int capture_mvc(std::span<const int> samples, const CaptureOptions& opts = {});

/// Throws Error(invalid_calibration) unless 0 <= rest < mvc <= 4095.
CalibrationProfile build_profile(int rest_raw, int mvc_raw, std::int64_t captured_at = 0,
                                 std::int64_t rest_window_ms = 0, std::int64_t mvc_window_ms = 0);

// Activation threshold right after calibration: half of the dynamic range.
double initial_threshold(const CalibrationProfile& profile) noexcept;

} // namespace myoctl
