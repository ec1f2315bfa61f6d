#pragma once

#include "myoctl/emg_source.hpp"
#include "myoctl/session.hpp"

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

namespace myoctl {

// Everything the engine file configures. JSON on disk:
//
//   {
//     "seed": 7,
//     "patient": {"preset": "moderate", "fatigue_rate": 0.02},
//     "script": "holds.csv"  |  [[start_ms, end_ms, effort], ...],
//     "control": {"strategy": "proportional", "th1": 20, "th2": 80, "delta": 5},
//     "plant": {"time_constant_ms": 80},
//     "calibration": {"rest_raw": 40, "mvc_raw": 1200}
//                  | {"capture": true, "rest_window_ms": 3000, "mvc_window_ms": 5000},
//     "average_window": 50,
//     "telemetry": {"decimation": 20},
//     "auto_start": true
//   }
struct EngineConfig {
    PatientModel patient;
    std::string patient_name = "moderate";
    IntentScript script;
    SessionOptions session;
};

EngineConfig parse_engine_config(std::string_view text, const std::filesystem::path& base_dir = {});
EngineConfig load_engine_config(const std::filesystem::path& path);

/// Preset name or path to a JSON patient file.
std::pair<PatientModel, std::string> resolve_patient(std::string_view preset_or_path);

std::unique_ptr<SyntheticSource> make_sim_source(const EngineConfig& cfg);

} // namespace myoctl
