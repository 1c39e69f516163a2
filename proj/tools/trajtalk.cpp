// trajtalk: one-shot apply, scenario replay, and the HTTP/WebSocket service.
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "trajtalk/apply/apply.hpp"
#include "trajtalk/core/io.hpp"
#include "trajtalk/error.hpp"
#include "trajtalk/gateway/replay.hpp"
#include "trajtalk/gateway/server.hpp"
#include "trajtalk/schema/spec.hpp"

using namespace trajtalk;

namespace {

void print_diff(const Trajectory& before, const Trajectory& after) {
    std::printf("%4s %10s %10s %10s %10s %10s %10s\n", "wp", "t", "dvel", "dforce", "dx", "dy", "dz");
    for (std::size_t i = 0; i < before.size(); ++i) {
        const auto& a = before[i];
        const auto& b = after[i];
        std::printf("%4zu %10.4f %+10.5f %+10.5f %+10.5f %+10.5f %+10.5f\n", i + 1, b.t, b.vel - a.vel, b.force - a.force,
                    b.pos.x - a.pos.x, b.pos.y - a.pos.y, b.pos.z - a.pos.z);
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(path + ": cannot write file");
    out << text;
}

int run_apply(const std::string& traj_path, const std::string& lms_path, const std::string& spec_path,
              const std::string& params_path, const std::string& out_path, bool serial) {
    const Trajectory traj = load_trajectory(traj_path);
    const LandmarkSet lms = load_landmarks(lms_path);
    const ApplyParams params = params_path.empty() ? ApplyParams{} : load_apply_params(params_path);
    std::vector<std::string> warnings;
    ModificationSpec spec;
    try {
        spec = parse_spec(read_file(spec_path), {}, &warnings);
    } catch (const ParseError& e) {
        throw ParseError(spec_path + ": " + e.what());
    }
    for (const auto& w : warnings) spdlog::warn("{}: {}", spec_path, w);
    const Trajectory out = apply(traj, spec, lms, params, serial ? Execution::serial : Execution::parallel);
    print_diff(traj, out);
    if (!out_path.empty()) save_trajectory(out, out_path);
    return 0;
}

struct ReplayArgs {
    std::string scenario;
    std::string backend;
    std::string script;
    std::string params;
    std::string out;
    std::string report;
    std::string log;
    bool wall_clock{false};
};

int run_replay(const ReplayArgs& a) {
    Scenario sc = load_scenario(a.scenario);
    if (!a.backend.empty()) sc.backend = parse_backend_kind(a.backend);
    if (!a.script.empty()) sc.script = a.script;
    if (!a.params.empty()) sc.params = load_apply_params(a.params);
    if (sc.backend == BackendKind::scripted && !sc.script) throw ParseError("scripted backend needs --script");
    ReplayOptions opts;
    opts.wall_clock = a.wall_clock;
    const ReplayResult r = replay(sc, opts);
    const auto report = report_json(r);
    if (!a.report.empty()) write_text(a.report, report.dump(2) + "\n");
    if (!a.log.empty()) write_text(a.log, events_jsonl(r.log));
    if (!a.out.empty()) save_trajectory(r.final_trajectory, a.out);
    std::printf("mode %s: %zu events, %zu modifications, final phase %s, %zu undelivered inputs\n",
                std::string(to_string(r.mode)).c_str(), r.log.size(),
                report["modification_count"].get<std::size_t>(), std::string(to_string(r.final_phase)).c_str(),
                r.undelivered);
    if (a.report.empty()) std::cout << report.dump(2) << "\n";
    return 0;
}

struct ServeArgs {
    std::string listen{"127.0.0.1:8080"};
    std::string backend{"mock"};
    std::string script;
    std::string params;
    std::string prompt;
    std::string log_dir;
};

int run_serve(const ServeArgs& a) {
    ServiceConfig cfg;
    const auto colon = a.listen.rfind(':');
    if (colon == std::string::npos) throw ParseError("--listen expects host:port");
    cfg.address = a.listen.substr(0, colon);
    const int port = std::stoi(a.listen.substr(colon + 1));
    if (port < 0 || port > 65535) throw ParseError("--listen port out of range");
    cfg.port = static_cast<std::uint16_t>(port);
    cfg.backend = parse_backend_kind(a.backend);
    if (!a.script.empty()) cfg.script = a.script;
    if (!a.params.empty()) cfg.params = load_apply_params(a.params);
    if (!a.prompt.empty()) cfg.prompt_path = a.prompt;
    if (!a.log_dir.empty()) cfg.log_dir = a.log_dir;

    // Signals are taken synchronously by sigwait so the handler can stop the server safely.
    sigset_t set;
    sigemptyset(&set);
    sigaddset(&set, SIGINT);
    sigaddset(&set, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &set, nullptr);

    Server server(cfg);
    const auto bound = server.start();
    std::printf("listening on %s:%u\n", cfg.address.c_str(), bound);
    std::fflush(stdout);
    std::thread waiter([&] {
        int sig = 0;
        sigwait(&set, &sig);
        server.stop();
    });
    server.wait();
    waiter.join();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verbal trajectory modification: apply, replay, serve"};
    app.require_subcommand(1);

    std::string traj_path, lms_path, spec_path, params_path, out_path;
    bool serial = false;
    auto* apply_cmd = app.add_subcommand("apply", "Apply one modification file to a trajectory and print the diff");
    apply_cmd->add_option("trajectory", traj_path, "Trajectory file (YAML or JSON)")->required()->check(CLI::ExistingFile);
    apply_cmd->add_option("landmarks", lms_path, "Landmarks file")->required()->check(CLI::ExistingFile);
    apply_cmd->add_option("spec", spec_path, "Modification YAML file")->required()->check(CLI::ExistingFile);
    apply_cmd->add_option("--params", params_path, "Apply parameter file")->check(CLI::ExistingFile);
    apply_cmd->add_option("--out", out_path, "Write the modified trajectory here (.json for JSON)");
    apply_cmd->add_flag("--serial", serial, "Use the serial kernels");

    ReplayArgs ra;
    auto* replay_cmd = app.add_subcommand("replay", "Run a scenario script and report analytics");
    replay_cmd->add_option("scenario", ra.scenario, "Scenario YAML file")->required()->check(CLI::ExistingFile);
    replay_cmd->add_option("--backend", ra.backend, "mock | scripted | llm (overrides the scenario)");
    replay_cmd->add_option("--script", ra.script, "Replies file for the scripted backend")->check(CLI::ExistingFile);
    replay_cmd->add_option("--params", ra.params, "Apply parameter file")->check(CLI::ExistingFile);
    replay_cmd->add_option("--out", ra.out, "Write the final trajectory here");
    replay_cmd->add_option("--report", ra.report, "Write the JSON report here instead of stdout");
    replay_cmd->add_option("--log", ra.log, "Write the event log here as JSON lines");
    replay_cmd->add_flag("--wall-clock", ra.wall_clock, "Real time for stamps, pauses and latencies");

    ServeArgs sa;
    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP + WebSocket service");
    serve_cmd->add_option("--listen", sa.listen, "host:port")->capture_default_str();
    serve_cmd->add_option("--backend", sa.backend, "mock | scripted | llm")->capture_default_str();
    serve_cmd->add_option("--script", sa.script, "Replies file for the scripted backend")->check(CLI::ExistingFile);
    serve_cmd->add_option("--params", sa.params, "Apply parameter file")->check(CLI::ExistingFile);
    serve_cmd->add_option("--prompt", sa.prompt, "Main prompt template replacing the built-in one")->check(CLI::ExistingFile);
    serve_cmd->add_option("--log-dir", sa.log_dir, "Append each session's events to <dir>/<id>.jsonl");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*apply_cmd) return run_apply(traj_path, lms_path, spec_path, params_path, out_path, serial);
        if (*replay_cmd) return run_replay(ra);
        if (*serve_cmd) return run_serve(sa);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
