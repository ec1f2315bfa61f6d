// engine: command-line front end over the myoctl C API.
//
//   engine --source sim --config cfg.json --duration 60000 --record out.csv
//   engine --source replay --replay out.csv --config cfg.json --record again.csv
//   engine --source sim --config cfg.json --listen 127.0.0.1:8765 --paced
//   engine analyze --record out.csv --holds script.csv --out metrics.json

#include "myoctl/myoctl.h"

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

namespace {

std::atomic<bool> g_interrupted{false};

void on_signal(int)
{
    g_interrupted.store(true);
}

int report(myoctl_status s, const char* what)
{
    std::cerr << "engine: " << what << ": " << myoctl_status_name(s) << ": " << myoctl_last_error();
    if (*myoctl_last_error_field())
        std::cerr << " (field " << myoctl_last_error_field() << ")";
    std::cerr << '\n';
    return 1 + static_cast<int>(s);
}

struct EngineHandle {
    myoctl_engine* ptr = nullptr;
    ~EngineHandle() { myoctl_engine_destroy(ptr); }
};

struct RunArgs {
    std::string source;
    std::string model;
    std::string script;
    std::string replay;
    std::string config;
    std::string record;
    std::string listen;
    std::optional<long long> duration;
    std::optional<unsigned long long> seed;
    bool paced = false;
};

int run_engine(const RunArgs& a)
{
    EngineHandle engine;
    if (auto s = myoctl_engine_load(a.config.c_str(), &engine.ptr); s != MYOCTL_OK)
        return report(s, "loading config");

    if (a.seed)
        if (auto s = myoctl_engine_set_seed(engine.ptr, *a.seed); s != MYOCTL_OK)
            return report(s, "seed");
    if (a.paced || !a.listen.empty())
        if (auto s = myoctl_engine_set_paced(engine.ptr, 1); s != MYOCTL_OK)
            return report(s, "pacing");

    if (a.source == "sim") {
        if (!a.model.empty())
            if (auto s = myoctl_engine_set_model(engine.ptr, a.model.c_str()); s != MYOCTL_OK)
                return report(s, "patient model");
        if (!a.script.empty())
            if (auto s = myoctl_engine_set_script(engine.ptr, a.script.c_str()); s != MYOCTL_OK)
                return report(s, "intent script");
        if (auto s = myoctl_engine_open_sim(engine.ptr); s != MYOCTL_OK)
            return report(s, "opening simulator");
    } else {
        if (a.replay.empty()) {
            std::cerr << "engine: --source replay needs --replay PATH\n";
            return 2;
        }
        if (auto s = myoctl_engine_open_replay(engine.ptr, a.replay.c_str()); s != MYOCTL_OK)
            return report(s, "opening replay");
    }

    if (!a.listen.empty()) {
        std::uint16_t port = 0;
        if (auto s = myoctl_engine_listen(engine.ptr, a.listen.c_str(), &port); s != MYOCTL_OK)
            return report(s, "listen");
        std::cerr << "engine: listening on port " << port << '\n';
    }

    long long duration = -1;
    if (a.duration)
        duration = *a.duration;
    else if (a.source == "sim" && a.listen.empty())
        duration = 60000;

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::atomic<bool> done{false};
    std::thread watcher([&] {
        while (!done.load()) {
            if (g_interrupted.load()) {
                myoctl_engine_interrupt(engine.ptr);
                break;
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(20));
        }
    });

    const auto s = myoctl_engine_run(engine.ptr, duration);
    done.store(true);
    watcher.join();
    if (s != MYOCTL_OK)
        return report(s, "session");

    myoctl_tick_stats stats{};
    myoctl_engine_stats(engine.ptr, &stats);
    std::cerr << "engine: " << myoctl_engine_row_count(engine.ptr) << " ticks";
    if (a.paced || !a.listen.empty())
        std::cerr << ", max lateness " << stats.max_late_ms << " ms, " << stats.late_ticks << " late ticks";
    std::cerr << '\n';

    if (!a.record.empty()) {
        if (auto e = myoctl_engine_export_csv(engine.ptr, a.record.c_str()); e != MYOCTL_OK)
            return report(e, "recording");
        std::cerr << "engine: session written to " << a.record << '\n';
    }
    return 0;
}

int run_analyze(const std::string& record, const std::string& holds, const std::string& out, double hold_fraction)
{
    char* json = nullptr;
    const auto s = myoctl_analyze_file(record.c_str(), holds.empty() ? nullptr : holds.c_str(), hold_fraction, &json);
    if (s != MYOCTL_OK)
        return report(s, "analyze");
    std::string text(json);
    myoctl_free(json);
    if (out == "-") {
        std::cout << text << '\n';
        return 0;
    }
    std::ofstream f(out);
    if (!(f << text << '\n')) {
        std::cerr << "engine: cannot write " << out << '\n';
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"sEMG hand-control engine"};
    app.set_version_flag("--version", std::string(myoctl_version()));

    RunArgs a;
    app.add_option("--source", a.source, "Signal source")->check(CLI::IsMember({"sim", "replay"}));
    app.add_option("--model", a.model, "Patient preset (severe, moderate, mild) or JSON model file");
    app.add_option("--script", a.script, "Intent script CSV (start_ms,end_ms,effort)");
    app.add_option("--replay", a.replay, "Session CSV to replay");
    app.add_option("--config", a.config, "Engine configuration (JSON)");
    app.add_option("--record", a.record, "Write the session CSV here");
    app.add_option("--listen", a.listen, "Serve the console protocol on ADDR:PORT (WebSocket)");
    app.add_option("--duration", a.duration, "Session length in ms (default: 60000 for sim, whole file for replay)");
    app.add_option("--seed", a.seed, "Session seed (overrides the config)");
    app.add_flag("--paced", a.paced, "Pace ticks to the wall clock");

    auto* analyze = app.add_subcommand("analyze", "Stability metrics for a recorded session");
    std::string rec, holds, out = "-";
    double hold_fraction = 0.8;
    analyze->add_option("--record", rec, "Session CSV")->required();
    analyze->add_option("--holds", holds, "Intent script whose non-zero segments are holds");
    analyze->add_option("--out", out, "Output path for the metrics JSON ('-' for stdout)")->required();
    analyze->add_option("--hold-fraction", hold_fraction, "Share of the hold peak below which a hold fails")
        ->check(CLI::Range(0.0, 1.0));
    app.require_subcommand(0, 1);

    CLI11_PARSE(app, argc, argv);

    if (analyze->parsed())
        return run_analyze(rec, holds, out, hold_fraction);

    if (a.source.empty() || a.config.empty()) {
        std::cerr << "engine: --source and --config are required (or use the analyze subcommand)\n"
                  << app.help();
        return 2;
    }
    return run_engine(a);
}
