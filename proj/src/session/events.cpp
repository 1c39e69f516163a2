#include "trajtalk/session/events.hpp"

#include <array>
#include <utility>

#include "trajtalk/error.hpp"

namespace trajtalk {

namespace {

constexpr std::array<std::pair<Mode, std::string_view>, 3> kModes = {{
    {Mode::bidirectional, "bidirectional"},
    {Mode::unidirectional, "unidirectional"},
    {Mode::no_modification, "no_modification"},
}};

constexpr std::array<std::pair<EventKind, std::string_view>, 7> kKinds = {{
    {EventKind::utterance, "utterance"},
    {EventKind::modification, "modification"},
    {EventKind::assurance, "assurance"},
    {EventKind::question, "question"},
    {EventKind::ignored, "ignored"},
    {EventKind::stop, "stop"},
    {EventKind::tick, "tick"},
}};

}  // namespace

std::string_view to_string(Mode m) noexcept {
    for (const auto& [k, s] : kModes)
        if (k == m) return s;
    return "bidirectional";
}

std::string_view to_string(Phase p) noexcept {
    switch (p) {
        case Phase::running: return "running";
        case Phase::paused: return "paused";
        case Phase::awaiting_clarification: return "awaiting_clarification";
        case Phase::stopped: return "stopped";
        case Phase::finished: return "finished";
    }
    return "running";
}

std::string_view to_string(EventKind k) noexcept {
    for (const auto& [kind, s] : kKinds)
        if (kind == k) return s;
    return "tick";
}

Mode parse_mode(std::string_view text) {
    for (const auto& [m, s] : kModes)
        if (s == text) return m;
    throw ParseError("unknown mode '" + std::string(text) + "' (expected bidirectional, unidirectional or no_modification)");
}

EventKind parse_event_kind(std::string_view text) {
    for (const auto& [k, s] : kKinds)
        if (s == text) return k;
    throw ParseError("unknown event kind '" + std::string(text) + "'");
}

nlohmann::json to_json(const Event& e) {
    nlohmann::json j = {
        {"seq", e.seq},
        {"wall_s", e.wall_s},
        {"progress", e.progress},
        {"kind", to_string(e.kind)},
        {"mode", to_string(e.mode)},
    };
    if (e.text) j["text"] = *e.text;
    if (e.spec_yaml) j["spec_yaml"] = *e.spec_yaml;
    if (e.latency) {
        j["interpret_ms"] = e.latency->interpret_s * 1e3;
        j["apply_ms"] = e.latency->apply_s * 1e3;
    }
    if (e.trajectory_hash) j["trajectory_hash"] = *e.trajectory_hash;
    return j;
}

Event event_from_json(const nlohmann::json& j) {
    Event e;
    e.seq = j.at("seq").get<std::uint64_t>();
    e.wall_s = j.at("wall_s").get<double>();
    e.progress = j.at("progress").get<double>();
    e.kind = parse_event_kind(j.at("kind").get<std::string>());
    e.mode = parse_mode(j.at("mode").get<std::string>());
    if (j.contains("text")) e.text = j["text"].get<std::string>();
    if (j.contains("spec_yaml")) e.spec_yaml = j["spec_yaml"].get<std::string>();
    if (j.contains("interpret_ms"))
        e.latency = LatencyBreakdown{j["interpret_ms"].get<double>() / 1e3, j.value("apply_ms", 0.0) / 1e3};
    if (j.contains("trajectory_hash")) e.trajectory_hash = j["trajectory_hash"].get<std::string>();
    return e;
}

}  // namespace trajtalk
