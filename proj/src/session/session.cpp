#include "trajtalk/session/session.hpp"

#include <algorithm>

#include <spdlog/spdlog.h>

#include "trajtalk/core/io.hpp"
#include "trajtalk/error.hpp"
#include "trajtalk/schema/spec.hpp"

namespace trajtalk {

double resume_point(double old_progress_time, const Trajectory& old_traj, const Trajectory& new_traj) {
    if (old_traj.size() != new_traj.size())
        throw ValidationError("resume_point needs trajectories with the same waypoint count");
    if (old_progress_time >= old_traj.end_time()) return new_traj.end_time();
    if (old_progress_time <= old_traj.start_time()) return new_traj.start_time();
    const std::size_t i = old_traj.segment_at(old_progress_time);
    const double span = old_traj[i + 1].t - old_traj[i].t;
    const double frac = (old_progress_time - old_traj[i].t) / span;
    if (frac == 0.0) return new_traj[i].t;
    return new_traj[i].t + frac * (new_traj[i + 1].t - new_traj[i].t);
}

Session::Session(Trajectory traj, LandmarkSet lms, SessionConfig config, std::shared_ptr<const Interpreter> interpreter,
                 std::shared_ptr<Clock> clock)
    : lms_(std::move(lms)),
      config_(config),
      interpreter_(std::move(interpreter)),
      clock_(std::move(clock)),
      state_{traj, traj, traj.start_time(), Phase::running, {}, std::nullopt} {
    validate(config_.params);
    if (!clock_) throw ValidationError("session needs a clock");
    if (!interpreter_ && config_.mode != Mode::no_modification)
        throw ValidationError("session needs an interpreter unless mode is no_modification");
}

void Session::emit(Event e) {
    e.seq = log_.size() + 1;
    e.wall_s = clock_->now();
    last_progress_ = std::max(last_progress_, progress_fraction(state_.current, state_.progress_time));
    e.progress = last_progress_;
    e.mode = config_.mode;
    log_.push_back(std::move(e));
    if (listener_) listener_(log_.back());
}

SessionState Session::tick(double dt) {
    if (!(dt > 0)) throw ValidationError("tick needs dt > 0");
    std::lock_guard lock(state_mu_);
    if (state_.phase == Phase::running) {
        state_.progress_time = std::min(state_.progress_time + dt, state_.current.end_time());
        if (state_.progress_time >= state_.current.end_time()) {
            state_.phase = Phase::finished;
            emit({.kind = EventKind::tick, .text = "finished"});
        }
    }
    return state_;
}

Outcome Session::submit_utterance(std::string_view text) {
    std::unique_lock command(command_mu_);
    std::string utterance(text);
    std::optional<PendingClarification> pending;
    std::optional<Trajectory> current;
    History history;
    {
        std::lock_guard lock(state_mu_);
        if (state_.phase == Phase::stopped || state_.phase == Phase::finished)
            throw StateError("cannot take an utterance while " + std::string(to_string(state_.phase)));
        pending = state_.pending;
        if (!pending) state_.phase = Phase::paused;
        emit({.kind = EventKind::utterance, .text = utterance});
        current = state_.current;
        history = state_.history;
    }

    if (config_.mode == Mode::no_modification) {
        clock_->sleep_for(config_.no_modification_pause_s);
        std::lock_guard lock(state_mu_);
        emit({.kind = EventKind::ignored, .text = "no_modification mode"});
        state_.phase = Phase::running;
        return {std::nullopt, false, state_.phase};
    }

    const double t0 = clock_->now();
    const InterpretResult result =
        pending ? interpreter_->interpret_clarification(*pending, utterance, *current, lms_, history)
                : interpreter_->interpret(utterance, *current, lms_, history);
    return interpret_and_apply(result, utterance, clock_->now() - t0);
}

Outcome Session::answer_clarification(std::string_view text) {
    std::unique_lock command(command_mu_);
    std::string answer(text);
    PendingClarification pending;
    std::optional<Trajectory> current;
    History history;
    {
        std::lock_guard lock(state_mu_);
        if (state_.phase != Phase::awaiting_clarification || !state_.pending)
            throw StateError("no clarifying question is pending (phase " + std::string(to_string(state_.phase)) + ")");
        pending = *state_.pending;
        emit({.kind = EventKind::utterance, .text = answer});
        current = state_.current;
        history = state_.history;
    }
    const double t0 = clock_->now();
    const InterpretResult result = interpreter_->interpret_clarification(pending, answer, *current, lms_, history);
    return interpret_and_apply(result, answer, clock_->now() - t0);
}

Outcome Session::interpret_and_apply(const InterpretResult& result, const std::string& utterance,
                                     double interpret_s) {
    std::lock_guard lock(state_mu_);
    const bool bidirectional = config_.mode == Mode::bidirectional;
    const Phase resume_phase = state_.pending ? Phase::awaiting_clarification : Phase::running;

    if (!result.ok()) {
        emit({.kind = EventKind::ignored, .text = *result.error});
        state_.phase = resume_phase;
        return {std::nullopt, false, state_.phase};
    }

    const InterpreterReply& reply = result.reply;
    state_.history.record({utterance, serialize_spec(reply.spec), reply.feedback});

    if (reply.needs_clarification) {
        if (!bidirectional) {
            state_.pending.reset();
            emit({.kind = EventKind::ignored, .text = "clarification suppressed"});
            state_.phase = Phase::running;
            return {std::nullopt, false, state_.phase};
        }
        const std::string q = reply.feedback.value_or(std::string(kDefaultClarifyingQuestion));
        state_.pending = PendingClarification{q, utterance};
        state_.phase = Phase::awaiting_clarification;
        if (++consecutive_questions_ >= config_.clarification_warn_after)
            spdlog::warn("{} clarifying questions in a row", consecutive_questions_);
        emit({.kind = EventKind::question, .text = q, .latency = LatencyBreakdown{interpret_s, 0.0}});
        return {q, false, state_.phase};
    }

    consecutive_questions_ = 0;
    state_.pending.reset();
    const ModificationSpec& spec = reply.spec;
    if (!spec.has_changes()) {
        emit({.kind = EventKind::ignored, .text = "no change"});
        state_.phase = Phase::running;
        return {std::nullopt, false, state_.phase};
    }

    bool modified = false;
    const bool reshapes = spec.changes_position() || spec.changes_velocity() || spec.changes_force();
    if (reshapes) {
        const double t0 = clock_->now();
        std::optional<Trajectory> next;
        try {
            next = apply(state_.current, spec, lms_, config_.params, config_.execution);
        } catch (const Error& e) {
            emit({.kind = EventKind::ignored, .text = std::string("apply failed: ") + e.what()});
            state_.phase = Phase::running;
            return {std::nullopt, false, state_.phase};
        }
        const double apply_s = clock_->now() - t0;
        state_.progress_time = resume_point(state_.progress_time, state_.current, *next);
        state_.current = std::move(*next);
        modified = true;
        emit({.kind = EventKind::modification,
              .spec_yaml = serialize_spec(spec),
              .latency = LatencyBreakdown{interpret_s, apply_s},
              .trajectory_hash = trajectory_hash(state_.current)});
    }

    std::optional<std::string> feedback;
    if (bidirectional && reply.feedback) {
        feedback = reply.feedback;
        emit({.kind = EventKind::assurance, .text = *reply.feedback});
    }

    if (spec.global.stop) {
        state_.phase = Phase::stopped;
        emit({.kind = EventKind::stop, .text = "requested"});
    } else if (state_.progress_time >= state_.current.end_time()) {
        state_.phase = Phase::finished;
        emit({.kind = EventKind::tick, .text = "finished"});
    } else {
        state_.phase = Phase::running;
    }
    return {feedback, modified, state_.phase};
}

SessionState Session::stop() {
    std::unique_lock command(command_mu_);
    std::lock_guard lock(state_mu_);
    if (state_.phase == Phase::finished) throw StateError("session already finished");
    if (state_.phase != Phase::stopped) {
        state_.phase = Phase::stopped;
        state_.pending.reset();
        emit({.kind = EventKind::stop, .text = "direct"});
    }
    return state_;
}

SessionState Session::state() const {
    std::lock_guard lock(state_mu_);
    return state_;
}

Phase Session::phase() const {
    std::lock_guard lock(state_mu_);
    return state_.phase;
}

State Session::executor() const {
    std::lock_guard lock(state_mu_);
    return interpolate_state(state_.current, state_.progress_time);
}

double Session::progress() const {
    std::lock_guard lock(state_mu_);
    return progress_fraction(state_.current, state_.progress_time);
}

std::vector<Event> Session::log() const {
    std::lock_guard lock(state_mu_);
    return log_;
}

std::vector<Event> Session::events_since(std::uint64_t after_seq) const {
    std::lock_guard lock(state_mu_);
    if (after_seq >= log_.size()) return {};
    return {log_.begin() + static_cast<std::ptrdiff_t>(after_seq), log_.end()};
}

void Session::set_listener(Listener listener) {
    std::lock_guard lock(state_mu_);
    listener_ = std::move(listener);
}

}  // namespace trajtalk
