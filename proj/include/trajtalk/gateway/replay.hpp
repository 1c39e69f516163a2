#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "trajtalk/apply/params.hpp"
#include "trajtalk/core/landmarks.hpp"
#include "trajtalk/core/trajectory.hpp"
#include "trajtalk/interp/backend.hpp"
#include "trajtalk/session/analytics.hpp"
#include "trajtalk/session/events.hpp"
#include "trajtalk/session/session.hpp"

namespace trajtalk {

struct TimedInput {
    std::optional<double> at;           // seconds since playback start
    std::optional<double> at_progress;  // fraction of the current trajectory
    std::string say;
};

struct Scenario {
    Mode mode{Mode::bidirectional};
    Trajectory trajectory;
    LandmarkSet landmarks;
    std::vector<TimedInput> inputs;
    BackendKind backend{BackendKind::mock};
    std::optional<std::filesystem::path> script;
    ApplyParams params;
    double dt{0.05};
    double pause_s{1.7};
};

// File paths inside a scenario are resolved against `base_dir`.
[[nodiscard]] Scenario parse_scenario(std::string_view yaml_text, const std::filesystem::path& base_dir,
                                      std::string_view origin = "<scenario>");
[[nodiscard]] Scenario load_scenario(const std::filesystem::path& path);

struct ReplayOptions {
    // Real time for stamps, pauses and latencies. Logs are then not reproducible.
    bool wall_clock{false};
    Execution execution{Execution::parallel};
    // Upper bound on simulated seconds, guarding against scenarios that never end.
    double max_time_s{3600.0};
};

struct ReplayResult {
    Mode mode{Mode::bidirectional};
    std::vector<Event> log;
    Trajectory original;
    Trajectory final_trajectory;
    Phase final_phase{Phase::running};
    std::vector<CcdfPoint> ccdf;
    std::optional<LatencyStats> latency;
    std::size_t undelivered{0};
};

// Plays the scenario to completion: ticks by dt, delivering each input once its
// time or progress is reached. While a question is pending the next input is
// delivered at once as the answer.
[[nodiscard]] ReplayResult replay(const Scenario& scenario, const ReplayOptions& options = {});
// Same, with an explicit backend in place of the scenario's.
[[nodiscard]] ReplayResult replay(const Scenario& scenario, std::shared_ptr<InterpreterBackend> backend,
                                  const ReplayOptions& options = {});

[[nodiscard]] nlohmann::json report_json(const ReplayResult& result);
// One JSON object per line, in log order.
[[nodiscard]] std::string events_jsonl(const std::vector<Event>& log);

}  // namespace trajtalk
