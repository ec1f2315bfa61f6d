#include "myoctl/engine_config.hpp"

#include "json_codec.hpp"
#include "myoctl/errors.hpp"
#include "myoctl/seed.hpp"

#include <fstream>
#include <sstream>

namespace myoctl {

namespace {

std::string read_file(const std::filesystem::path& path, const char* what)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::io, std::string("cannot open ") + what + " " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::int64_t get_int(const json& j, const char* key)
{
    if (!j.is_number_integer())
        throw Error(ErrorCode::validation, std::string(key) + " must be an integer", key);
    return j.get<std::int64_t>();
}

IntentScript script_from_json(const json& j, const std::filesystem::path& base)
{
    if (j.is_string()) {
        std::filesystem::path p = j.get<std::string>();
        if (p.is_relative() && !base.empty())
            p = base / p;
        return load_intent_script(p);
    }
    if (!j.is_array())
        throw Error(ErrorCode::validation, "script must be a path or a list of [start_ms, end_ms, effort]",
                    "script");
    std::vector<IntentSegment> segs;
    for (const auto& s : j) {
        if (!s.is_array() || s.size() != 3 || !s[0].is_number_integer() || !s[1].is_number_integer() ||
            !s[2].is_number())
            throw Error(ErrorCode::validation, "script entries must be [start_ms, end_ms, effort]", "script");
        segs.push_back({s[0].get<std::int64_t>(), s[1].get<std::int64_t>(), s[2].get<double>()});
    }
    return IntentScript(std::move(segs));
}

} // namespace

std::pair<PatientModel, std::string> resolve_patient(std::string_view preset_or_path)
{
    if (auto p = patient_preset(preset_or_path))
        return {*p, std::string(preset_or_path)};
    const std::filesystem::path path(preset_or_path);
    json j;
    try {
        j = json::parse(read_file(path, "patient model"));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse, "patient model " + path.string() + ": " + e.what());
    }
    PatientModel base;
    if (j.is_object() && j.contains("preset")) {
        auto p = patient_preset(j["preset"].get<std::string>());
        if (!p)
            throw Error(ErrorCode::validation, "unknown patient preset", "preset");
        base = *p;
    }
    return {patient_from_json(j, base), path.stem().string()};
}

EngineConfig parse_engine_config(std::string_view text, const std::filesystem::path& base_dir)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse, std::string("engine config: ") + e.what());
    }
    if (!j.is_object())
        throw Error(ErrorCode::schema, "engine config must be a JSON object");

    EngineConfig cfg;
    cfg.patient = *patient_preset("moderate");
    auto& s = cfg.session;
    for (const auto& [key, v] : j.items()) {
        if (key == "seed") {
            if (!v.is_number_unsigned())
                throw Error(ErrorCode::validation, "seed must be a non-negative integer", "seed");
            s.seed = v.get<std::uint64_t>();
        } else if (key == "patient") {
            PatientModel base = cfg.patient;
            if (v.is_string()) {
                std::tie(cfg.patient, cfg.patient_name) = resolve_patient(v.get<std::string>());
                continue;
            }
            if (v.is_object() && v.contains("preset")) {
                const auto name = v["preset"].get<std::string>();
                auto p = patient_preset(name);
                if (!p)
                    throw Error(ErrorCode::validation, "unknown patient preset '" + name + "'", "preset");
                base = *p;
                cfg.patient_name = name;
            } else {
                cfg.patient_name = "custom";
            }
            cfg.patient = patient_from_json(v, base);
        } else if (key == "script") {
            cfg.script = script_from_json(v, base_dir);
        } else if (key == "control") {
            s.control = control_from_json(v, s.control);
            validate(s.control);
        } else if (key == "plant") {
            s.plant = plant_from_json(v, s.plant);
            validate(s.plant);
        } else if (key == "calibration") {
            if (!v.is_object())
                throw Error(ErrorCode::validation, "calibration must be an object", "calibration");
            json profile = json::object();
            for (const auto& [ck, cv] : v.items()) {
                if (ck == "capture") {
                    if (!cv.is_boolean())
                        throw Error(ErrorCode::validation, "capture must be true or false", "capture");
                    s.auto_calibrate = cv.get<bool>();
                } else if (ck == "rest_window_ms") {
                    s.capture.rest_window_ms = get_int(cv, "rest_window_ms");
                } else if (ck == "mvc_window_ms") {
                    s.capture.mvc_window_ms = get_int(cv, "mvc_window_ms");
                } else if (ck == "min_samples") {
                    s.capture.estimator.min_samples = static_cast<std::size_t>(get_int(cv, "min_samples"));
                } else if (ck == "mvc_percentile") {
                    if (!cv.is_number())
                        throw Error(ErrorCode::validation, "mvc_percentile must be a number", "mvc_percentile");
                    s.capture.estimator.mvc_percentile = cv.get<double>();
                } else {
                    profile[ck] = cv;
                }
            }
            if (!profile.empty())
                s.profile = profile_from_json(profile);
            if (s.capture.rest_window_ms <= 0 || s.capture.mvc_window_ms <= 0)
                throw Error(ErrorCode::validation, "capture windows must be positive", "rest_window_ms");
        } else if (key == "average_window") {
            const auto w = get_int(v, "average_window");
            if (w < 1)
                throw Error(ErrorCode::validation, "average_window must be at least 1", "average_window");
            s.average_window = static_cast<std::size_t>(w);
        } else if (key == "telemetry") {
            if (!v.is_object())
                throw Error(ErrorCode::validation, "telemetry must be an object", "telemetry");
            if (v.contains("decimation")) {
                const auto d = get_int(v["decimation"], "decimation");
                if (d < 1)
                    throw Error(ErrorCode::validation, "decimation must be at least 1", "decimation");
                s.telemetry_decimation = static_cast<std::size_t>(d);
            }
        } else if (key == "auto_start") {
            if (!v.is_boolean())
                throw Error(ErrorCode::validation, "auto_start must be true or false", "auto_start");
            s.auto_start = v.get<bool>();
        } else if (key == "paced") {
            if (!v.is_boolean())
                throw Error(ErrorCode::validation, "paced must be true or false", "paced");
            s.paced = v.get<bool>();
        } else {
            throw Error(ErrorCode::schema, "unknown engine config key '" + key + "'", key);
        }
    }
    return cfg;
}

EngineConfig load_engine_config(const std::filesystem::path& path)
{
    return parse_engine_config(read_file(path, "engine config"), path.parent_path());
}

std::unique_ptr<SyntheticSource> make_sim_source(const EngineConfig& cfg)
{
    return std::make_unique<SyntheticSource>(cfg.patient, cfg.script,
                                             derive_seed(cfg.session.seed, SeedStream::source),
                                             cfg.patient_name);
}

} // namespace myoctl
