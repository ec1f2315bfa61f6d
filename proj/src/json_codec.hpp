#pragma once

// nlohmann/json conversions for the engine's value types. Internal header.

#include "myoctl/calibration.hpp"
#include "myoctl/control.hpp"
#include "myoctl/emg_source.hpp"
#include "myoctl/hand_plant.hpp"
#include "myoctl/session.hpp"

#include <json.hpp>

namespace myoctl {

using json = nlohmann::json;

json to_json(const ControlConfig& c);
json to_json(const PlantParams& p);
json to_json(const CalibrationProfile& p);
json to_json(const PatientModel& m);
json to_json(const ConfigPatch& p);
json to_json(const CaptureSettings& c);

// Readers accept partial objects on top of `base`; type errors and unknown
// keys raise Error(validation) naming the key.
ControlConfig control_from_json(const json& j, ControlConfig base = {});
PlantParams plant_from_json(const json& j, PlantParams base = {});
CalibrationProfile profile_from_json(const json& j);
PatientModel patient_from_json(const json& j, PatientModel base = {});
ConfigPatch patch_from_json(const json& j);
CaptureSettings capture_from_json(const json& j, CaptureSettings base = {});

} // namespace myoctl
