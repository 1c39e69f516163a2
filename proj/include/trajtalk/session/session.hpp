#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trajtalk/apply/apply.hpp"
#include "trajtalk/core/landmarks.hpp"
#include "trajtalk/core/trajectory.hpp"
#include "trajtalk/interp/history.hpp"
#include "trajtalk/interp/interpreter.hpp"
#include "trajtalk/session/clock.hpp"
#include "trajtalk/session/events.hpp"

namespace trajtalk {

struct SessionConfig {
    Mode mode{Mode::bidirectional};
    ApplyParams params;
    // Fixed stand-in for interpretation time when utterances change nothing.
    double no_modification_pause_s{1.7};
    // Consecutive clarifying questions after which a warning is logged.
    int clarification_warn_after{3};
    Execution execution{Execution::parallel};
};

struct SessionState {
    Trajectory current;
    Trajectory original;
    double progress_time{0};
    Phase phase{Phase::running};
    History history;
    std::optional<PendingClarification> pending;
};

struct Outcome {
    std::optional<std::string> feedback;
    bool modified{false};
    Phase phase{Phase::running};
};

// Where playback continues on a modified trajectory: same segment index, same
// fraction of the way through it. Both trajectories must have equal length.
[[nodiscard]] double resume_point(double old_progress_time, const Trajectory& old_traj, const Trajectory& new_traj);

// Simulated executor plus the pause / interpret / apply-or-ask / resume loop.
//
// submit_utterance, answer_clarification and stop are serialized on one
// command lock. Interpretation runs without the state lock, so readers see
// phase "paused" meanwhile and tick() (state lock only) cannot advance.
class Session {
public:
    using Listener = std::function<void(const Event&)>;

    // The trajectory and landmarks are validated by their own constructors.
    Session(Trajectory traj, LandmarkSet lms, SessionConfig config, std::shared_ptr<const Interpreter> interpreter,
            std::shared_ptr<Clock> clock);

    Session(const Session&) = delete;
    Session& operator=(const Session&) = delete;

    // Advances playback by dt seconds when running; throws ValidationError for dt <= 0.
    SessionState tick(double dt);

    // Pauses, interprets and applies or asks, per mode. While a question is
    // pending the text is taken as its answer. Throws StateError once stopped
    // or finished.
    Outcome submit_utterance(std::string_view text);

    // Throws StateError unless a question is pending.
    Outcome answer_clarification(std::string_view text);

    // Terminal. Throws StateError when already finished.
    SessionState stop();

    [[nodiscard]] SessionState state() const;
    [[nodiscard]] Phase phase() const;
    [[nodiscard]] State executor() const;
    [[nodiscard]] double progress() const;
    [[nodiscard]] std::vector<Event> log() const;
    // Events with seq > after_seq, in order.
    [[nodiscard]] std::vector<Event> events_since(std::uint64_t after_seq) const;
    [[nodiscard]] const LandmarkSet& landmarks() const noexcept { return lms_; }
    [[nodiscard]] const SessionConfig& config() const noexcept { return config_; }

    // Called under the state lock for every new event, in log order.
    void set_listener(Listener listener);

private:
    // interpret_s is measured on the session clock, so simulated clocks give
    // reproducible logs.
    Outcome interpret_and_apply(const InterpretResult& result, const std::string& utterance, double interpret_s);
    // Stamps seq, wall time, progress and mode; caller holds state_mu_.
    void emit(Event e);

    LandmarkSet lms_;
    SessionConfig config_;
    std::shared_ptr<const Interpreter> interpreter_;
    std::shared_ptr<Clock> clock_;

    mutable std::mutex command_mu_;
    mutable std::mutex state_mu_;
    SessionState state_;
    std::vector<Event> log_;
    double last_progress_{0};
    int consecutive_questions_{0};
    Listener listener_;
};

}  // namespace trajtalk
