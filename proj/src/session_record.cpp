#include "myoctl/session_record.hpp"

#include "json_codec.hpp"
#include "myoctl/errors.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <map>

namespace myoctl {

namespace {

void append(std::string& out, double v)
{
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v); // shortest round-trip form
    out.append(buf, ptr);
}

void append(std::string& out, std::int64_t v)
{
    char buf[24];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, ptr);
}

void append_event(std::string& out, const SessionEvent& e)
{
    out += "#EVENT ";
    append(out, e.t_ms);
    out += ' ';
    out += e.type;
    out += ' ';
    out += e.payload;
    out += '\n';
}

template <typename T>
bool parse_field(std::string_view s, T& out)
{
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end && !s.empty();
}

constexpr std::array<std::string_view, 7> kColumns = {"t_ms",      "volts",     "raw",     "emg_percent",
                                                      "x_percent", "reference", "position"};

} // namespace

void write_csv(const SessionRecord& rec, std::ostream& out)
{
    const auto& h = rec.header;
    std::string buf;
    buf.reserve(1 << 20);
    buf += "# version=" + std::to_string(h.version) + '\n';
    buf += "# seed=" + std::to_string(h.seed) + '\n';
    buf += "# source=" + h.source + '\n';
    buf += "# profile=" + (h.profile ? to_json(*h.profile).dump() : std::string("none")) + '\n';
    buf += "# config=" + to_json(h.config).dump() + '\n';
    buf += "# plant=" + to_json(h.plant).dump() + '\n';
    buf += "# average_window=" + std::to_string(h.average_window) + '\n';
    buf += "# capture=" + to_json(h.capture).dump() + '\n';
    buf += kSessionColumns;
    buf += '\n';

    std::size_t ev = 0;
    for (const auto& r : rec.rows) {
        while (ev < rec.events.size() && rec.events[ev].t_ms <= r.t_ms)
            append_event(buf, rec.events[ev++]);
        append(buf, r.t_ms);
        buf += ',';
        append(buf, r.volts);
        buf += ',';
        append(buf, static_cast<std::int64_t>(r.raw));
        buf += ',';
        append(buf, r.emg_percent);
        buf += ',';
        append(buf, r.x_percent);
        buf += ',';
        append(buf, r.reference);
        buf += ',';
        append(buf, r.position);
        buf += '\n';
        if (buf.size() > (1u << 20) - 256) {
            out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    for (; ev < rec.events.size(); ++ev)
        append_event(buf, rec.events[ev]);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void export_csv(const SessionRecord& rec, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorCode::io, "cannot write session file " + path.string());
    write_csv(rec, out);
    out.flush();
    if (!out)
        throw Error(ErrorCode::io, "write failed for " + path.string());
}

SessionRecord import_csv(const std::filesystem::path& path)
{
    SessionCsvReader reader(path);
    SessionRecord rec;
    rec.header = reader.header();
    while (auto row = reader.next_row()) {
        rec.rows.push_back(*row);
        for (auto& e : reader.take_events())
            rec.events.push_back(std::move(e));
    }
    for (auto& e : reader.take_events())
        rec.events.push_back(std::move(e));
    return rec;
}

SessionCsvReader::SessionCsvReader(const std::filesystem::path& path)
    : name_(path.string())
{
    auto in = std::make_unique<std::ifstream>(path, std::ios::binary);
    if (!*in)
        throw Error(ErrorCode::io, "cannot open session file " + path.string());
    in_ = std::move(in);
    read_preamble();
}

SessionCsvReader::SessionCsvReader(std::unique_ptr<std::istream> in, std::string name)
    : in_(std::move(in))
    , name_(std::move(name))
{
    read_preamble();
}

void SessionCsvReader::fail(const std::string& what) const
{
    throw Error(ErrorCode::parse, name_ + ": line " + std::to_string(line_no_) + ": " + what);
}

void SessionCsvReader::read_preamble()
{
    std::map<std::string, std::string, std::less<>> kv;
    std::string line;
    bool have_columns = false;
    while (std::getline(*in_, line)) {
        ++line_no_;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line.front() != '#') {
            if (line != kSessionColumns) {
                std::string missing;
                for (auto col : kColumns)
                    if (line.find(col) == std::string::npos)
                        missing += (missing.empty() ? "" : ", ") + std::string(col);
                throw Error(ErrorCode::schema,
                            name_ + ": column header must be '" + kSessionColumns + "'" +
                                (missing.empty() ? std::string() : "; missing: " + missing));
            }
            have_columns = true;
            break;
        }
        std::string_view body(line);
        body.remove_prefix(1);
        while (!body.empty() && body.front() == ' ')
            body.remove_prefix(1);
        const auto eq = body.find('=');
        if (eq == std::string_view::npos)
            continue; // free-form comment
        kv.emplace(std::string(body.substr(0, eq)), std::string(body.substr(eq + 1)));
    }
    if (!have_columns)
        throw Error(ErrorCode::schema, name_ + ": no column header row");

    auto get = [&](std::string_view key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };

    if (auto v = get("version")) {
        if (!parse_field(std::string_view(*v), header_.version))
            throw Error(ErrorCode::parse, name_ + ": bad version '" + *v + "'");
        if (header_.version != kSessionFormatVersion)
            throw Error(ErrorCode::unsupported_version,
                        name_ + ": session format version " + *v + " is not supported (expected " +
                            std::to_string(kSessionFormatVersion) + ")");
    }
    try {
        if (auto v = get("seed"); v && !parse_field(std::string_view(*v), header_.seed))
            throw Error(ErrorCode::parse, "bad seed '" + *v + "'");
        if (auto v = get("source"))
            header_.source = *v;
        if (auto v = get("profile"); v && *v != "none")
            header_.profile = profile_from_json(json::parse(*v));
        if (auto v = get("config")) {
            header_.config = control_from_json(json::parse(*v));
            validate(header_.config);
        }
        if (auto v = get("plant")) {
            header_.plant = plant_from_json(json::parse(*v));
            validate(header_.plant);
        }
        if (auto v = get("average_window"); v && !parse_field(std::string_view(*v), header_.average_window))
            throw Error(ErrorCode::parse, "bad average_window '" + *v + "'");
        if (auto v = get("capture"))
            header_.capture = capture_from_json(json::parse(*v));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse, name_ + ": preamble: " + e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::parse)
            throw Error(ErrorCode::parse, name_ + ": preamble: " + e.what());
        throw;
    }
}

std::optional<SessionRow> SessionCsvReader::next_row()
{
    if (done_)
        return std::nullopt;
    std::string line;
    while (std::getline(*in_, line)) {
        ++line_no_;
        const bool terminated = !in_->eof();
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line.front() == '#') {
            if (!line.starts_with("#EVENT "))
                continue;
            std::string_view body(line);
            body.remove_prefix(7);
            const auto s1 = body.find(' ');
            const auto s2 = s1 == std::string_view::npos ? s1 : body.find(' ', s1 + 1);
            SessionEvent e;
            if (s1 == std::string_view::npos || !parse_field(body.substr(0, s1), e.t_ms))
                fail("malformed event line");
            if (s2 == std::string_view::npos) {
                e.type = std::string(body.substr(s1 + 1));
            } else {
                e.type = std::string(body.substr(s1 + 1, s2 - s1 - 1));
                e.payload = std::string(body.substr(s2 + 1));
            }
            pending_.push_back(std::move(e));
            continue;
        }

        const std::string row_label = "row " + std::to_string(rows_);
        if (!terminated)
            fail(row_label + " is truncated (no line terminator)");

        std::array<std::string_view, 7> f;
        std::string_view rest(line);
        std::size_t n = 0;
        for (;;) {
            const auto comma = rest.find(',');
            if (n == f.size())
                fail(row_label + " has more than 7 fields");
            f[n++] = rest.substr(0, comma);
            if (comma == std::string_view::npos)
                break;
            rest.remove_prefix(comma + 1);
        }
        if (n != f.size())
            fail(row_label + " has " + std::to_string(n) + " fields, expected 7");

        SessionRow r;
        std::int64_t raw = 0;
        const bool ok = parse_field(f[0], r.t_ms);
        if (!ok)
            fail(row_label + ": t_ms is not an integer");
        if (!parse_field(f[1], r.volts))
            fail(row_label + ": volts is not a number");
        if (!parse_field(f[2], raw))
            fail(row_label + ": raw is not an integer");
        r.raw = static_cast<int>(raw);
        if (!parse_field(f[3], r.emg_percent))
            fail(row_label + ": emg_percent is not a number");
        if (!parse_field(f[4], r.x_percent))
            fail(row_label + ": x_percent is not a number");
        if (!parse_field(f[5], r.reference))
            fail(row_label + ": reference is not a number");
        if (!parse_field(f[6], r.position))
            fail(row_label + ": position is not a number");
        ++rows_;
        return r;
    }
    done_ = true;
    return std::nullopt;
}

std::vector<SessionEvent> SessionCsvReader::take_events()
{
    std::vector<SessionEvent> out;
    out.swap(pending_);
    return out;
}

} // namespace myoctl
