#include "myoctl/emg_source.hpp"

#include "myoctl/errors.hpp"
#include "myoctl/session_record.hpp"
#include "myoctl/signal_pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace myoctl {

void validate(const PatientModel& m)
{
    auto require = [](bool ok, const char* field, const char* msg) {
        if (!ok)
            throw Error(ErrorCode::validation, msg, field);
    };
    require(std::isfinite(m.rest_noise_mean) && m.rest_noise_mean >= 0.0, "rest_noise_mean",
            "rest_noise_mean must be non-negative");
    require(std::isfinite(m.rest_noise_sd) && m.rest_noise_sd >= 0.0, "rest_noise_sd",
            "rest_noise_sd must be non-negative");
    require(std::isfinite(m.mvc_level) && m.rest_noise_mean < m.mvc_level && m.mvc_level <= kFullScaleVolts,
            "mvc_level", "mvc_level must exceed rest_noise_mean and be at most 5 V");
    require(std::isfinite(m.ripple_amplitude) && m.ripple_amplitude >= 0.0, "ripple_amplitude",
            "ripple_amplitude must be non-negative");
    require(std::isfinite(m.ripple_period_ms) && m.ripple_period_ms > 0.0, "ripple_period_ms",
            "ripple_period_ms must be positive");
    require(std::isfinite(m.fatigue_rate) && m.fatigue_rate >= 0.0, "fatigue_rate",
            "fatigue_rate must be non-negative");
    require(std::isfinite(m.contraction_rise_time_ms) && m.contraction_rise_time_ms > 0.0,
            "contraction_rise_time_ms", "contraction_rise_time_ms must be positive");
    require(std::isfinite(m.jitter_fraction) && m.jitter_fraction >= 0.0, "jitter_fraction",
            "jitter_fraction must be non-negative");
}

std::optional<PatientModel> patient_preset(std::string_view name)
{
    // Simulator defaults only. "severe" has little MVC headroom and ripple that
    // is large relative to it.
    if (name == "severe")
        return PatientModel{0.06, 0.02, 0.6, 0.09, 250.0, 0.02, 150.0, 0.6};
    if (name == "moderate")
        return PatientModel{0.05, 0.015, 1.5, 0.1, 300.0, 0.01, 120.0, 0.5};
    if (name == "mild")
        return PatientModel{0.04, 0.01, 3.0, 0.08, 400.0, 0.005, 100.0, 0.4};
    return std::nullopt;
}

std::vector<std::string> patient_preset_names()
{
    return {"severe", "moderate", "mild"};
}

double mvc_effective(const PatientModel& m, double t_ms) noexcept
{
    return m.mvc_level * std::max(0.0, 1.0 - m.fatigue_rate * t_ms / 60000.0);
}

IntentScript::IntentScript(std::vector<IntentSegment> segments)
    : segments_(std::move(segments))
{
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const auto& s = segments_[i];
        if (s.start_ms < 0 || s.end_ms <= s.start_ms)
            throw Error(ErrorCode::validation,
                        "intent segment " + std::to_string(i) + " needs 0 <= start_ms < end_ms", "segments");
        if (!(s.effort >= 0.0 && s.effort <= 1.0))
            throw Error(ErrorCode::validation, "intent segment " + std::to_string(i) + " effort outside [0, 1]",
                        "segments");
        if (i > 0 && s.start_ms < segments_[i - 1].end_ms)
            throw Error(ErrorCode::validation,
                        "intent segment " + std::to_string(i) + " overlaps or precedes the previous one",
                        "segments");
    }
}

double IntentScript::effort_at(std::int64_t t) const noexcept
{
    if (segments_.empty())
        return 0.0;
    // Sequential access is the common case; fall back to a search otherwise.
    if (cursor_ >= segments_.size() || segments_[cursor_].start_ms > t) {
        auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                                   [](std::int64_t v, const IntentSegment& s) { return v < s.start_ms; });
        cursor_ = it == segments_.begin() ? 0 : static_cast<std::size_t>(it - segments_.begin() - 1);
    }
    while (cursor_ + 1 < segments_.size() && segments_[cursor_].end_ms <= t)
        ++cursor_;
    const auto& s = segments_[cursor_];
    return (t >= s.start_ms && t < s.end_ms) ? s.effort : 0.0;
}

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

template <typename T>
bool parse_number(std::string_view s, T& out)
{
    s = trim(s);
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end;
}

} // namespace

IntentScript parse_intent_script(std::string_view text)
{
    std::vector<IntentSegment> segs;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.empty() || line.front() == '#')
            continue;
        if (line.starts_with("start_ms"))
            continue;

        std::string_view f[3];
        std::size_t n = 0;
        while (n < 3) {
            const auto comma = line.find(',');
            f[n++] = line.substr(0, comma);
            if (comma == std::string_view::npos) {
                line = {};
                break;
            }
            line = line.substr(comma + 1);
        }
        IntentSegment seg;
        if (n != 3 || !line.empty() || !parse_number(f[0], seg.start_ms) || !parse_number(f[1], seg.end_ms) ||
            !parse_number(f[2], seg.effort))
            throw Error(ErrorCode::parse, "intent script line " + std::to_string(line_no) +
                                              ": expected start_ms,end_ms,effort");
        segs.push_back(seg);
    }
    return IntentScript(std::move(segs));
}

IntentScript load_intent_script(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::io, "cannot open intent script " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_intent_script(ss.str());
}

SyntheticSource::SyntheticSource(PatientModel model, IntentScript script, std::uint64_t seed, std::string name)
    : model_(model)
    , script_(std::move(script))
    , name_(std::move(name))
    , rng_(seed)
    , effort_alpha_(1.0 - std::exp(-1.0 / model.contraction_rise_time_ms))
    , jitter_alpha_(std::exp(-4.0 / model.ripple_period_ms))
{
    validate(model_);
}

std::optional<double> SyntheticSource::next()
{
    const auto t = static_cast<double>(t_ms_);

    const double baseline = std::max(0.0, model_.rest_noise_mean + model_.rest_noise_sd * gauss_(rng_));

    effort_ += (script_.effort_at(t_ms_) - effort_) * effort_alpha_;

    // AR(1) low-pass of white noise, unit stationary variance.
    const double w = gauss_(rng_);
    jitter_ = jitter_alpha_ * jitter_ + std::sqrt(1.0 - jitter_alpha_ * jitter_alpha_) * w;
    const double ripple = model_.ripple_amplitude *
        (std::sin(2.0 * std::numbers::pi * t / model_.ripple_period_ms) + model_.jitter_fraction * jitter_);

    const double v = baseline + effort_ * mvc_effective(model_, t) + ripple;
    ++t_ms_;
    return std::clamp(v, 0.0, kFullScaleVolts);
}

ReplaySource::ReplaySource(const std::filesystem::path& path)
    : reader_(std::make_unique<SessionCsvReader>(path))
    , path_(path)
{
}

ReplaySource::~ReplaySource() = default;

std::optional<double> ReplaySource::next()
{
    auto row = reader_->next_row();
    if (!row)
        return std::nullopt;
    return row->volts;
}

std::string ReplaySource::descriptor() const
{
    return reader_->header().source;
}

std::unique_ptr<ReplaySource> open_replay(const std::filesystem::path& path)
{
    return std::make_unique<ReplaySource>(path);
}

} // namespace myoctl
