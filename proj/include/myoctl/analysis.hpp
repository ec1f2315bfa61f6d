#pragma once

#include "myoctl/emg_source.hpp"
#include "myoctl/session_record.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace myoctl {

struct HoldSegment {
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0; // exclusive
};

struct AnalysisOptions {
    double hold_fraction = 0.8; // a hold fails when aperture drops below this share of the segment peak
    std::size_t ripple_window = 501; // ticks in the centered trend window, odd
};

struct SessionMetrics {
    std::int64_t reference_transition_count = 0; // ticks where the reference differs from the previous tick
    double aperture_ripple_rms = 0.0;            // see compute_metrics
    std::int64_t time_open_ms = 0;               // ticks with a non-zero reference
    std::int64_t hold_failures = 0;
    double mean_emg_during_hold = 0.0;

    friend bool operator==(const SessionMetrics&, const SessionMetrics&) = default;
};

/// Stability metrics for a recorded session.
///
/// aperture_ripple_rms is the RMS deviation of the reference from its centered
/// moving mean over ripple_window ticks (the window is truncated at the record
/// edges). Slow intentional travel follows the mean; fluctuations faster than
/// the window do not.
///
/// Hold segments must lie inside the record; an empty record yields all zeros.
SessionMetrics compute_metrics(const SessionRecord& record, std::span<const HoldSegment> holds,
                               const AnalysisOptions& opts = {});

// Segments of the script with non-zero effort.
std::vector<HoldSegment> holds_from_script(const IntentScript& script);

std::string metrics_to_json(const SessionMetrics& m);

} // namespace myoctl
