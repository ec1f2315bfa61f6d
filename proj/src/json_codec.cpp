#include "json_codec.hpp"

#include "myoctl/errors.hpp"

#include <set>
#include <string>

namespace myoctl {

namespace {

double number(const json& j, const std::string& key)
{
    if (!j.is_number())
        throw Error(ErrorCode::validation, key + " must be a number", key);
    return j.get<double>();
}

std::int64_t integer(const json& j, const std::string& key)
{
    if (!j.is_number_integer())
        throw Error(ErrorCode::validation, key + " must be an integer", key);
    return j.get<std::int64_t>();
}

bool boolean(const json& j, const std::string& key)
{
    if (!j.is_boolean())
        throw Error(ErrorCode::validation, key + " must be true or false", key);
    return j.get<bool>();
}

Strategy strategy(const json& j)
{
    if (!j.is_string())
        throw Error(ErrorCode::validation, "strategy must be a string", "strategy");
    auto s = parse_strategy(j.get<std::string>());
    if (!s)
        throw Error(ErrorCode::validation, "unknown strategy '" + j.get<std::string>() + "'", "strategy");
    return *s;
}

void require_object(const json& j, const char* what)
{
    if (!j.is_object())
        throw Error(ErrorCode::validation, std::string(what) + " must be an object", what);
}

} // namespace

json to_json(const ControlConfig& c)
{
    return json{{"strategy", std::string(to_string(c.strategy))},
                {"th", c.th},
                {"th1", c.th1},
                {"th2", c.th2},
                {"delta", c.delta},
                {"hysteresis_gap", c.hysteresis_gap},
                {"literal_map", c.literal_map}};
}

json to_json(const PlantParams& p)
{
    return json{{"max_rate", p.max_rate},
                {"close_max_rate", p.close_max_rate},
                {"time_constant_ms", p.time_constant_ms},
                {"encoder_noise_sd", p.encoder_noise_sd}};
}

json to_json(const CalibrationProfile& p)
{
    return json{{"rest_raw", p.rest_raw},
                {"mvc_raw", p.mvc_raw},
                {"captured_at", p.captured_at},
                {"rest_window_ms", p.rest_window_ms},
                {"mvc_window_ms", p.mvc_window_ms}};
}

json to_json(const CaptureSettings& c)
{
    return json{{"rest_window_ms", c.rest_window_ms},
                {"mvc_window_ms", c.mvc_window_ms},
                {"min_samples", c.estimator.min_samples},
                {"mvc_percentile", c.estimator.mvc_percentile}};
}

CaptureSettings capture_from_json(const json& j, CaptureSettings c)
{
    require_object(j, "capture");
    for (const auto& [key, v] : j.items()) {
        if (key == "rest_window_ms")
            c.rest_window_ms = integer(v, key);
        else if (key == "mvc_window_ms")
            c.mvc_window_ms = integer(v, key);
        else if (key == "min_samples")
            c.estimator.min_samples = static_cast<std::size_t>(integer(v, key));
        else if (key == "mvc_percentile")
            c.estimator.mvc_percentile = number(v, key);
        else
            throw Error(ErrorCode::validation, "unknown capture parameter '" + key + "'", key);
    }
    if (c.rest_window_ms <= 0 || c.mvc_window_ms <= 0)
        throw Error(ErrorCode::validation, "capture windows must be positive", "rest_window_ms");
    if (!(c.estimator.mvc_percentile >= 0.0 && c.estimator.mvc_percentile <= 100.0))
        throw Error(ErrorCode::validation, "mvc_percentile must lie in [0, 100]", "mvc_percentile");
    return c;
}

json to_json(const PatientModel& m)
{
    return json{{"rest_noise_mean", m.rest_noise_mean},
                {"rest_noise_sd", m.rest_noise_sd},
                {"mvc_level", m.mvc_level},
                {"ripple_amplitude", m.ripple_amplitude},
                {"ripple_period_ms", m.ripple_period_ms},
                {"fatigue_rate", m.fatigue_rate},
                {"contraction_rise_time_ms", m.contraction_rise_time_ms},
                {"jitter_fraction", m.jitter_fraction}};
}

json to_json(const ConfigPatch& p)
{
    json j = json::object();
    if (p.strategy)
        j["strategy"] = std::string(to_string(*p.strategy));
    if (p.th)
        j["th"] = *p.th;
    if (p.th1)
        j["th1"] = *p.th1;
    if (p.th2)
        j["th2"] = *p.th2;
    if (p.delta)
        j["delta"] = *p.delta;
    if (p.hysteresis_gap)
        j["hysteresis_gap"] = *p.hysteresis_gap;
    if (p.literal_map)
        j["literal_map"] = *p.literal_map;
    return j;
}

ControlConfig control_from_json(const json& j, ControlConfig base)
{
    return patch_from_json(j).applied_to(base);
}

ConfigPatch patch_from_json(const json& j)
{
    require_object(j, "patch");
    ConfigPatch p;
    for (const auto& [key, v] : j.items()) {
        if (key == "strategy")
            p.strategy = strategy(v);
        else if (key == "th")
            p.th = number(v, key);
        else if (key == "th1")
            p.th1 = number(v, key);
        else if (key == "th2")
            p.th2 = number(v, key);
        else if (key == "delta")
            p.delta = number(v, key);
        else if (key == "hysteresis_gap")
            p.hysteresis_gap = number(v, key);
        else if (key == "literal_map")
            p.literal_map = boolean(v, key);
        else
            throw Error(ErrorCode::validation, "unknown control parameter '" + key + "'", key);
    }
    return p;
}

PlantParams plant_from_json(const json& j, PlantParams p)
{
    require_object(j, "plant");
    for (const auto& [key, v] : j.items()) {
        if (key == "max_rate")
            p.max_rate = number(v, key);
        else if (key == "close_max_rate")
            p.close_max_rate = number(v, key);
        else if (key == "time_constant_ms")
            p.time_constant_ms = number(v, key);
        else if (key == "encoder_noise_sd")
            p.encoder_noise_sd = number(v, key);
        else
            throw Error(ErrorCode::validation, "unknown plant parameter '" + key + "'", key);
    }
    return p;
}

CalibrationProfile profile_from_json(const json& j)
{
    require_object(j, "profile");
    CalibrationProfile p;
    bool rest = false, mvc = false;
    for (const auto& [key, v] : j.items()) {
        if (key == "rest_raw") {
            p.rest_raw = static_cast<int>(integer(v, key));
            rest = true;
        } else if (key == "mvc_raw") {
            p.mvc_raw = static_cast<int>(integer(v, key));
            mvc = true;
        } else if (key == "captured_at")
            p.captured_at = integer(v, key);
        else if (key == "rest_window_ms")
            p.rest_window_ms = integer(v, key);
        else if (key == "mvc_window_ms")
            p.mvc_window_ms = integer(v, key);
        else
            throw Error(ErrorCode::validation, "unknown profile key '" + key + "'", key);
    }
    if (!rest || !mvc)
        throw Error(ErrorCode::validation, "profile needs rest_raw and mvc_raw", rest ? "mvc_raw" : "rest_raw");
    return build_profile(p.rest_raw, p.mvc_raw, p.captured_at, p.rest_window_ms, p.mvc_window_ms);
}

PatientModel patient_from_json(const json& j, PatientModel m)
{
    require_object(j, "patient");
    for (const auto& [key, v] : j.items()) {
        if (key == "preset")
            continue; // resolved by the caller
        if (key == "rest_noise_mean")
            m.rest_noise_mean = number(v, key);
        else if (key == "rest_noise_sd")
            m.rest_noise_sd = number(v, key);
        else if (key == "mvc_level")
            m.mvc_level = number(v, key);
        else if (key == "ripple_amplitude")
            m.ripple_amplitude = number(v, key);
        else if (key == "ripple_period_ms")
            m.ripple_period_ms = number(v, key);
        else if (key == "fatigue_rate")
            m.fatigue_rate = number(v, key);
        else if (key == "contraction_rise_time_ms")
            m.contraction_rise_time_ms = number(v, key);
        else if (key == "jitter_fraction")
            m.jitter_fraction = number(v, key);
        else
            throw Error(ErrorCode::validation, "unknown patient parameter '" + key + "'", key);
    }
    validate(m);
    return m;
}

} // namespace myoctl
