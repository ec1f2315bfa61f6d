#include "myoctl/myoctl.h"

#include "myoctl/analysis.hpp"
#include "myoctl/engine_config.hpp"
#include "myoctl/errors.hpp"
#include "myoctl/session.hpp"
#include "myoctl/signal_pipeline.hpp"
#include "myoctl/wire.hpp"
#include "myoctl/wire_server.hpp"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

using namespace myoctl;

struct myoctl_engine {
    EngineConfig config;
    std::unique_ptr<Session> session;
    std::unique_ptr<WireServer> server;
    bool ran = false;
};

struct myoctl_subscription {
    std::shared_ptr<Subscription> sub;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_field;

myoctl_status status_of(ErrorCode code)
{
    switch (code) {
    case ErrorCode::validation: return MYOCTL_ERR_VALIDATION;
    case ErrorCode::state: return MYOCTL_ERR_STATE;
    case ErrorCode::calibration_required: return MYOCTL_ERR_CALIBRATION_REQUIRED;
    case ErrorCode::invalid_calibration: return MYOCTL_ERR_INVALID_CALIBRATION;
    case ErrorCode::insufficient_data: return MYOCTL_ERR_INSUFFICIENT_DATA;
    case ErrorCode::parse: return MYOCTL_ERR_PARSE;
    case ErrorCode::schema: return MYOCTL_ERR_SCHEMA;
    case ErrorCode::unsupported_version: return MYOCTL_ERR_UNSUPPORTED_VERSION;
    case ErrorCode::io: return MYOCTL_ERR_IO;
    case ErrorCode::contract: return MYOCTL_ERR_CONTRACT;
    }
    return MYOCTL_ERR_INTERNAL;
}

myoctl_status fail(myoctl_status s, std::string msg, std::string field = {})
{
    g_error = std::move(msg);
    g_field = std::move(field);
    return s;
}

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
myoctl_status guarded(Fn&& fn)
{
    g_error.clear();
    g_field.clear();
    try {
        return fn();
    } catch (const Error& e) {
        return fail(status_of(e.code()), e.what(), e.field());
    } catch (const std::bad_alloc&) {
        return fail(MYOCTL_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(MYOCTL_ERR_INTERNAL, e.what());
    }
}

char* dup_string(const std::string& s)
{
    auto* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p)
        throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

myoctl_status require_configurable(const myoctl_engine* e)
{
    if (!e)
        return fail(MYOCTL_ERR_INVALID_ARGUMENT, "null engine handle");
    if (e->session)
        return fail(MYOCTL_ERR_STATE, "engine source already opened; settings are frozen");
    return MYOCTL_OK;
}

myoctl_status require_session(const myoctl_engine* e)
{
    if (!e)
        return fail(MYOCTL_ERR_INVALID_ARGUMENT, "null engine handle");
    if (!e->session)
        return fail(MYOCTL_ERR_STATE, "open a source first (sim or replay)");
    return MYOCTL_OK;
}

} // namespace

extern "C" {

const char* myoctl_version(void)
{
    return "1.0.0";
}

const char* myoctl_status_name(myoctl_status s)
{
    switch (s) {
    case MYOCTL_OK: return "ok";
    case MYOCTL_ERR_VALIDATION: return "validation";
    case MYOCTL_ERR_STATE: return "state";
    case MYOCTL_ERR_CALIBRATION_REQUIRED: return "calibration_required";
    case MYOCTL_ERR_INVALID_CALIBRATION: return "invalid_calibration";
    case MYOCTL_ERR_INSUFFICIENT_DATA: return "insufficient_data";
    case MYOCTL_ERR_PARSE: return "parse";
    case MYOCTL_ERR_SCHEMA: return "schema";
    case MYOCTL_ERR_UNSUPPORTED_VERSION: return "unsupported_version";
    case MYOCTL_ERR_IO: return "io";
    case MYOCTL_ERR_CONTRACT: return "contract";
    case MYOCTL_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case MYOCTL_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* myoctl_last_error(void)
{
    return g_error.c_str();
}

const char* myoctl_last_error_field(void)
{
    return g_field.c_str();
}

void myoctl_free(char* str)
{
    std::free(str);
}

myoctl_status myoctl_engine_create(const char* config_json, myoctl_engine** out)
{
    return guarded([&] {
        if (!out)
            return fail(MYOCTL_ERR_INVALID_ARGUMENT, "null output pointer");
        auto e = std::make_unique<myoctl_engine>();
        e->config = parse_engine_config(config_json ? config_json : "{}");
        *out = e.release();
        return MYOCTL_OK;
    });
}

myoctl_status myoctl_engine_load(const char* config_path, myoctl_engine** out)
{
    return guarded([&] {
        if (!out || !config_path)
            return fail(MYOCTL_ERR_INVALID_ARGUMENT, "null argument");
        auto e = std::make_unique<myoctl_engine>();
        e->config = load_engine_config(config_path);
        *out = e.release();
        return MYOCTL_OK;
    });
}

void myoctl_engine_destroy(myoctl_engine* engine)
{
    if (!engine)
        return;
    if (engine->server)
        engine->server->stop();
    delete engine;
}

myoctl_status myoctl_engine_set_seed(myoctl_engine* e, uint64_t seed)
{
    return guarded([&] {
        if (auto s = require_configurable(e); s != MYOCTL_OK)
            return s;
        e->config.session.seed = seed;
        return MYOCTL_OK;
    });
}

myoctl_status myoctl_engine_set_model(myoctl_engine* e, const char* preset_or_path)
{
    return guarded([&] {
        if (auto s = require_configurable(e); s != MYOCTL_OK)
            return s;
        if (!preset_or_path)
            return fail(MYOCTL_ERR_INVALID_ARGUMENT, "null model");
        std::tie(e->config.patient, e->config.patient_name) = resolve_patient(preset_or_path);
        return MYOCTL_OK;
    });
}

myoctl_status myoctl_engine_set_script(myoctl_engine* e, const char* path)
{
    return guarded([&] {
        if (auto s = require_configurable(e); s != MYOCTL_OK)
            return s;
        if (!path)
            return fail(MYOCTL_ERR_INVALID_ARGUMENT, "null script path");
        e->config.script = load_intent_script(path);
        return MYOCTL_OK;
    });
}

myoctl_status myoctl_engine_set_paced(myoctl_engine* e, int paced)
{
    return guarded([&] {
        if (auto s = require_configurable(e); s != MYOCTL_OK)
            return s;
        e->config.session.paced = paced != 0;
        return MYOCTL_OK;
    });
}

myoctl_status myoctl_engine_open_sim(myoctl_engine* e)
{
    return guarded([&] {
        if (auto s = require_configurable(e); s != MYOCTL_OK)
            return s;
        e->session = std::make_unique<Session>(e->config.session, make_sim_source(e->config));
        return MYOCTL_OK;
    });
}

myoctl_status myoctl_engine_open_replay(myoctl_engine* e, const char* path)
{
    return guarded([&] {
        if (auto s = require_configurable(e); s != MYOCTL_OK)
            return s;
        if (!path)
            return fail(MYOCTL_ERR_INVALID_ARGUMENT, "null replay path");
        auto src = open_replay(path);
        SessionOptions opts = replay_options(src->reader().header());
        opts.telemetry_decimation = e->config.session.telemetry_decimation;
        opts.paced = e->config.session.paced;
        e->session = std::make_unique<Session>(opts, std::move(src));
        return MYOCTL_OK;
    });
}

myoctl_status myoctl_engine_run(myoctl_engine* e, int64_t duration_ms)
{
    return guarded([&] {
        if (auto s = require_session(e); s != MYOCTL_OK)
            return s;
        if (e->ran)
            return fail(MYOCTL_ERR_STATE, "session already ran");
        e->ran = true;
        e->session->run(duration_ms);
        return MYOCTL_OK;
    });
}

myoctl_status myoctl_engine_interrupt(myoctl_engine* e)
{
    return guarded([&] {
        if (auto s = require_session(e); s != MYOCTL_OK)
            return s;
        e->session->interrupt();
        return MYOCTL_OK;
    });
}

myoctl_status myoctl_engine_command(myoctl_engine* e, const char* message, char** reply_json)
{
    return guarded([&] {
        if (auto s = require_session(e); s != MYOCTL_OK)
            return s;
        if (!message)
            return fail(MYOCTL_ERR_INVALID_ARGUMENT, "null message");
        std::string reply;
        myoctl_status status = MYOCTL_OK;
        try {
            const Command cmd = parse_wire_command(message);
            const CommandReply r = e->session->handle_command(cmd);
            reply = encode_reply(cmd, r);
            if (!r.ok)
                status = fail(status_of(r.code), r.message, r.field);
        } catch (const Error& err) {
            reply = encode_error(err);
            status = fail(status_of(err.code()), err.what(), err.field());
        }
        if (reply_json)
            *reply_json = dup_string(reply);
        return status;
    });
}

myoctl_status myoctl_engine_subscribe(myoctl_engine* e, size_t capacity, myoctl_subscription** out)
{
    return guarded([&] {
        if (auto s = require_session(e); s != MYOCTL_OK)
            return s;
        if (!out)
            return fail(MYOCTL_ERR_INVALID_ARGUMENT, "null output pointer");
        *out = new myoctl_subscription{e->session->subscribe(capacity)};
        return MYOCTL_OK;
    });
}

int myoctl_subscription_poll(myoctl_subscription* sub, char** message_json)
{
    if (!sub || !message_json)
        return 0;
    auto n = sub->sub->poll();
    if (!n)
        return 0;
    try {
        *message_json = dup_string(encode_notice(*n));
    } catch (...) {
        return 0;
    }
    return 1;
}

uint64_t myoctl_subscription_dropped(const myoctl_subscription* sub)
{
    return sub ? sub->sub->dropped() : 0;
}

void myoctl_subscription_destroy(myoctl_subscription* sub)
{
    delete sub;
}

myoctl_status myoctl_engine_listen(myoctl_engine* e, const char* endpoint, uint16_t* bound_port)
{
    return guarded([&] {
        if (auto s = require_session(e); s != MYOCTL_OK)
            return s;
        if (!endpoint)
            return fail(MYOCTL_ERR_INVALID_ARGUMENT, "null endpoint");
        if (e->server)
            return fail(MYOCTL_ERR_STATE, "already listening");
        const auto [host, port] = parse_endpoint(endpoint);
        e->server = std::make_unique<WireServer>(*e->session, host, port);
        if (bound_port)
            *bound_port = e->server->port();
        return MYOCTL_OK;
    });
}

int64_t myoctl_engine_row_count(const myoctl_engine* e)
{
    if (!e || !e->session)
        return 0;
    return static_cast<int64_t>(e->session->record().rows.size());
}

myoctl_status myoctl_engine_stats(const myoctl_engine* e, myoctl_tick_stats* out)
{
    return guarded([&] {
        if (auto s = require_session(e); s != MYOCTL_OK)
            return s;
        if (!out)
            return fail(MYOCTL_ERR_INVALID_ARGUMENT, "null output pointer");
        const auto st = e->session->stats();
        *out = myoctl_tick_stats{st.ticks, st.max_late_ms, st.late_ticks};
        return MYOCTL_OK;
    });
}

myoctl_status myoctl_engine_export_csv(const myoctl_engine* e, const char* path)
{
    return guarded([&] {
        if (auto s = require_session(e); s != MYOCTL_OK)
            return s;
        if (!path)
            return fail(MYOCTL_ERR_INVALID_ARGUMENT, "null path");
        if (!e->ran)
            return fail(MYOCTL_ERR_STATE, "nothing recorded yet");
        export_csv(e->session->record(), path);
        return MYOCTL_OK;
    });
}

myoctl_status myoctl_analyze_file(const char* record_path, const char* holds_path, double hold_fraction,
                                  char** metrics_json)
{
    return guarded([&] {
        if (!record_path || !metrics_json)
            return fail(MYOCTL_ERR_INVALID_ARGUMENT, "null argument");
        const SessionRecord rec = import_csv(record_path);
        std::vector<HoldSegment> holds;
        if (holds_path)
            holds = holds_from_script(load_intent_script(holds_path));
        AnalysisOptions opts;
        if (hold_fraction > 0.0)
            opts.hold_fraction = hold_fraction;
        *metrics_json = dup_string(metrics_to_json(compute_metrics(rec, holds, opts)));
        return MYOCTL_OK;
    });
}

myoctl_status myoctl_quantize(double volts, int* raw)
{
    return guarded([&] {
        if (!raw)
            return fail(MYOCTL_ERR_INVALID_ARGUMENT, "null output pointer");
        *raw = quantize(volts);
        return MYOCTL_OK;
    });
}

myoctl_status myoctl_normalize(int raw, int rest_raw, int mvc_raw, double* percent)
{
    return guarded([&] {
        if (!percent)
            return fail(MYOCTL_ERR_INVALID_ARGUMENT, "null output pointer");
        CalibrationProfile p;
        p.rest_raw = rest_raw;
        p.mvc_raw = mvc_raw;
        *percent = normalize(raw, p);
        return MYOCTL_OK;
    });
}

double myoctl_onoff_step(double emg, double th)
{
    return onoff_step(emg, th).r;
}

double myoctl_proportional_map(double emg, double th1, double th2, int literal)
{
    return proportional_map(emg, th1, th2, literal != 0);
}

double myoctl_deadband_step(double r, double x, double delta)
{
    return deadband_step(DeadbandState{r, 0.0}, x, delta).r;
}

double myoctl_rescale(double r, double delta)
{
    return rescale(r, delta).r;
}

} // extern "C"
