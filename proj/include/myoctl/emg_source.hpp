#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace myoctl {

// Parametric post-stroke extensor envelope. Voltages are in the electrode's
// 0-5 V output range; times are milliseconds.
struct PatientModel {
    double rest_noise_mean = 0.05;
    double rest_noise_sd = 0.015;
    double mvc_level = 1.5;
    double ripple_amplitude = 0.1;
    double ripple_period_ms = 300.0;
    double fatigue_rate = 0.01;            // fraction of MVC lost per minute
    double contraction_rise_time_ms = 120.0;
    double jitter_fraction = 0.5;          // band-limited jitter, relative to ripple_amplitude

    friend bool operator==(const PatientModel&, const PatientModel&) = default;
};

void validate(const PatientModel& model);

/// Named simulator presets: "severe", "moderate", "mild". Illustrative values only.
std::optional<PatientModel> patient_preset(std::string_view name);
std::vector<std::string> patient_preset_names();

/// MVC after linear fatigue decay, floored at zero.
double mvc_effective(const PatientModel& model, double t_ms) noexcept;

struct IntentSegment {
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0; // exclusive
    double effort = 0.0;     // fraction of MVC
    friend bool operator==(const IntentSegment&, const IntentSegment&) = default;
};

class IntentScript {
public:
    IntentScript() = default;
    explicit IntentScript(std::vector<IntentSegment> segments); // validates

    // Target effort at t; zero outside every segment.
    double effort_at(std::int64_t t_ms) const noexcept;

    const std::vector<IntentSegment>& segments() const noexcept { return segments_; }
    std::int64_t end_ms() const noexcept { return segments_.empty() ? 0 : segments_.back().end_ms; }

private:
    std::vector<IntentSegment> segments_;
    mutable std::size_t cursor_ = 0;
};

// CSV with columns start_ms,end_ms,effort; a header row and '#' comments are allowed.
IntentScript load_intent_script(const std::filesystem::path& path);
IntentScript parse_intent_script(std::string_view text);

// Pull-based producer of conditioned envelope voltages at 1 ms spacing.
class SampleSource {
public:
    virtual ~SampleSource() = default;
    // nullopt once the stream is exhausted.
    virtual std::optional<double> next() = 0;
    virtual std::string descriptor() const = 0;
};

class SyntheticSource final : public SampleSource {
public:
    SyntheticSource(PatientModel model, IntentScript script, std::uint64_t seed, std::string name = "custom");

    std::optional<double> next() override;
    std::string descriptor() const override { return "sim:" + name_; }

    std::int64_t time_ms() const noexcept { return t_ms_; }

private:
    PatientModel model_;
    IntentScript script_;
    std::string name_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> gauss_{0.0, 1.0};
    double effort_ = 0.0;
    double jitter_ = 0.0;
    double effort_alpha_;
    double jitter_alpha_;
    std::int64_t t_ms_ = 0;
};

class SessionCsvReader;

/// Streams the volts column of a recorded session. Events met along the way
/// are buffered for the caller (see take_events).
class ReplaySource final : public SampleSource {
public:
    explicit ReplaySource(const std::filesystem::path& path);
    ~ReplaySource() override;

    std::optional<double> next() override;
    std::string descriptor() const override;

    SessionCsvReader& reader() noexcept { return *reader_; }

private:
    std::unique_ptr<SessionCsvReader> reader_;
    std::filesystem::path path_;
};

std::unique_ptr<ReplaySource> open_replay(const std::filesystem::path& path);

} // namespace myoctl
