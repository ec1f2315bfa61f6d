#include "myoctl/calibration.hpp"

#include "myoctl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace myoctl {

namespace {

void require_length(std::span<const int> samples, const CaptureOptions& opts, const char* what)
{
    if (samples.size() < opts.min_samples)
        throw Error(ErrorCode::insufficient_data,
                    std::string(what) + " window has " + std::to_string(samples.size()) +
                        " samples, need at least " + std::to_string(opts.min_samples));
}

} // namespace

int capture_rest(std::span<const int> samples, const CaptureOptions& opts)
{
    require_length(samples, opts, "rest");
    const double sum = std::accumulate(samples.begin(), samples.end(), 0.0);
    return static_cast<int>(std::lround(sum / static_cast<double>(samples.size())));
}

int capture_mvc(std::span<const int> samples, const CaptureOptions& opts)
{
    require_length(samples, opts, "MVC");
    if (!(opts.mvc_percentile >= 0.0 && opts.mvc_percentile <= 100.0))
        throw Error(ErrorCode::validation, "MVC percentile must lie in [0, 100]", "mvc_percentile");

    std::vector<int> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    // Position scaled by 100; exact for whole-number percentiles, so halves round consistently.
    const double scaled = opts.mvc_percentile * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(scaled / 100.0));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double rem = scaled - 100.0 * static_cast<double>(lo);
    const double value = sorted[lo] + rem * (sorted[hi] - sorted[lo]) / 100.0;
    return static_cast<int>(std::lround(value));
}

CalibrationProfile build_profile(int rest_raw, int mvc_raw, std::int64_t captured_at,
                                 std::int64_t rest_window_ms, std::int64_t mvc_window_ms)
{
    CalibrationProfile p{rest_raw, mvc_raw, captured_at, rest_window_ms, mvc_window_ms};
    if (!p.valid())
        throw Error(ErrorCode::invalid_calibration,
                    "MVC level (" + std::to_string(mvc_raw) + ") must exceed rest level (" +
                        std::to_string(rest_raw) + ") within [0, 4095]");
    return p;
}

double initial_threshold(const CalibrationProfile&) noexcept
{
    return 50.0;
}

} // namespace myoctl
