#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace trajtalk {

// Communication strategy, fixed for the lifetime of a session.
enum class Mode { bidirectional, unidirectional, no_modification };

enum class Phase { running, paused, awaiting_clarification, stopped, finished };

enum class EventKind { utterance, modification, assurance, question, ignored, stop, tick };

[[nodiscard]] std::string_view to_string(Mode m) noexcept;
[[nodiscard]] std::string_view to_string(Phase p) noexcept;
[[nodiscard]] std::string_view to_string(EventKind k) noexcept;
[[nodiscard]] Mode parse_mode(std::string_view text);
[[nodiscard]] EventKind parse_event_kind(std::string_view text);

struct LatencyBreakdown {
    double interpret_s{0};
    double apply_s{0};

    [[nodiscard]] double total_s() const noexcept { return interpret_s + apply_s; }
};

// One log record. `text` holds the utterance, the spoken sentence, or the
// reason an utterance was ignored, depending on `kind`.
struct Event {
    std::uint64_t seq{0};
    double wall_s{0};
    double progress{0};  // elapsed fraction of the current trajectory
    EventKind kind{EventKind::tick};
    Mode mode{Mode::bidirectional};
    std::optional<std::string> text;
    std::optional<std::string> spec_yaml;
    std::optional<LatencyBreakdown> latency;
    std::optional<std::string> trajectory_hash;
};

[[nodiscard]] nlohmann::json to_json(const Event& e);
[[nodiscard]] Event event_from_json(const nlohmann::json& j);

}  // namespace trajtalk
