#pragma once

#include "myoctl/calibration.hpp"
#include "myoctl/control.hpp"
#include "myoctl/hand_plant.hpp"

#include <cstdint>
#include <filesystem>
#include <istream>
#include <memory>
#include <ostream>
#include <optional>
#include <string>
#include <vector>

namespace myoctl {

inline constexpr int kSessionFormatVersion = 1;

struct SessionHeader {
    int version = kSessionFormatVersion;
    std::uint64_t seed = 0;
    std::string source;
    std::optional<CalibrationProfile> profile; // profile in force at t = 0
    ControlConfig config;                      // control config in force at t = 0
    PlantParams plant;
    std::size_t average_window = 50;
    CaptureSettings capture;                   // windows for calibrate_rest / calibrate_mvc

    friend bool operator==(const SessionHeader&, const SessionHeader&) = default;
};

struct SessionRow {
    std::int64_t t_ms = 0;
    double volts = 0.0;
    int raw = 0;
    double emg_percent = 0.0;
    double x_percent = 0.0;
    double reference = 0.0;
    double position = 0.0;

    friend bool operator==(const SessionRow&, const SessionRow&) = default;
};

// `t_ms` is the first tick the event affects; payload is compact JSON.
struct SessionEvent {
    std::int64_t t_ms = 0;
    std::string type;
    std::string payload = "{}";

    friend bool operator==(const SessionEvent&, const SessionEvent&) = default;
};

struct SessionRecord {
    SessionHeader header;
    std::vector<SessionRow> rows;
    std::vector<SessionEvent> events;

    friend bool operator==(const SessionRecord&, const SessionRecord&) = default;
};

inline constexpr const char* kSessionColumns = "t_ms,volts,raw,emg_percent,x_percent,reference,position";

void export_csv(const SessionRecord& record, const std::filesystem::path& path);
void write_csv(const SessionRecord& record, std::ostream& out);

SessionRecord import_csv(const std::filesystem::path& path);

// Incremental reader; keeps memory flat for long recordings.
class SessionCsvReader {
public:
    explicit SessionCsvReader(const std::filesystem::path& path);
    explicit SessionCsvReader(std::unique_ptr<std::istream> in, std::string name = "<stream>");

    const SessionHeader& header() const noexcept { return header_; }

    // Next data row; events encountered before it are appended to pending events.
    std::optional<SessionRow> next_row();
    std::vector<SessionEvent> take_events();
    // Data rows consumed so far.
    std::size_t rows_read() const noexcept { return rows_; }

private:
    void read_preamble();
    [[noreturn]] void fail(const std::string& what) const;

    std::unique_ptr<std::istream> in_;
    std::string name_;
    SessionHeader header_;
    std::vector<SessionEvent> pending_;
    std::size_t line_no_ = 0;
    std::size_t rows_ = 0;
    bool done_ = false;
};

} // namespace myoctl
