#include "myoctl/analysis.hpp"

#include "json_codec.hpp"
#include "myoctl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace myoctl {

SessionMetrics compute_metrics(const SessionRecord& record, std::span<const HoldSegment> holds,
                               const AnalysisOptions& opts)
{
    SessionMetrics m;
    const auto& rows = record.rows;
    if (rows.empty())
        return m;

    const std::int64_t first = rows.front().t_ms;
    const std::int64_t last = rows.back().t_ms;
    for (const auto& h : holds)
        if (h.start_ms < first || h.end_ms > last + 1 || h.end_ms < h.start_ms)
            throw Error(ErrorCode::validation,
                        "hold segment [" + std::to_string(h.start_ms) + ", " + std::to_string(h.end_ms) +
                            ") is outside the record",
                        "holds");

    if (opts.ripple_window == 0 || opts.ripple_window % 2 == 0)
        throw Error(ErrorCode::validation, "ripple_window must be odd", "ripple_window");

    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (rows[k].reference > 0.0)
            ++m.time_open_ms;
        if (k > 0 && rows[k].reference != rows[k - 1].reference)
            ++m.reference_transition_count;
    }

    // Offsets from the first sample keep a constant record exactly at zero.
    const double base = rows.front().reference;
    std::vector<double> prefix(rows.size() + 1, 0.0);
    for (std::size_t k = 0; k < rows.size(); ++k)
        prefix[k + 1] = prefix[k] + (rows[k].reference - base);
    const std::size_t half = opts.ripple_window / 2;
    double sq = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const std::size_t lo = k >= half ? k - half : 0;
        const std::size_t hi = std::min(rows.size(), k + half + 1);
        const double mean = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
        const double dev = (rows[k].reference - base) - mean;
        sq += dev * dev;
    }
    m.aperture_ripple_rms = std::sqrt(sq / static_cast<double>(rows.size()));

    double emg_sum = 0.0;
    std::int64_t hold_ticks = 0;
    for (const auto& h : holds) {
        const auto begin = static_cast<std::size_t>(h.start_ms - first);
        const auto end = static_cast<std::size_t>(h.end_ms - first);
        double peak = 0.0;
        for (std::size_t k = begin; k < end; ++k) {
            peak = std::max(peak, rows[k].position);
            emg_sum += rows[k].emg_percent;
            ++hold_ticks;
        }
        if (peak <= 0.0)
            continue;
        const double floor = opts.hold_fraction * peak;
        bool holding = false;
        for (std::size_t k = begin; k < end; ++k) {
            if (rows[k].position >= floor) {
                holding = true;
            } else if (holding) {
                ++m.hold_failures;
                holding = false;
            }
        }
    }
    if (hold_ticks > 0)
        m.mean_emg_during_hold = emg_sum / static_cast<double>(hold_ticks);
    return m;
}

std::vector<HoldSegment> holds_from_script(const IntentScript& script)
{
    std::vector<HoldSegment> out;
    for (const auto& s : script.segments())
        if (s.effort > 0.0)
            out.push_back({s.start_ms, s.end_ms});
    return out;
}

std::string metrics_to_json(const SessionMetrics& m)
{
    return json{{"reference_transition_count", m.reference_transition_count},
                {"aperture_ripple_rms", m.aperture_ripple_rms},
                {"time_open_ms", m.time_open_ms},
                {"hold_failures", m.hold_failures},
                {"mean_emg_during_hold", m.mean_emg_during_hold}}
        .dump(2);
}

} // namespace myoctl
