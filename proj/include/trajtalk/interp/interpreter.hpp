#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "trajtalk/core/landmarks.hpp"
#include "trajtalk/core/trajectory.hpp"
#include "trajtalk/interp/backend.hpp"
#include "trajtalk/interp/history.hpp"
#include "trajtalk/schema/reply.hpp"

namespace trajtalk {

struct InterpreterOptions {
    double proximity_threshold{kDefaultProximityThreshold};
    // Replaces the embedded main prompt template when set.
    std::optional<std::string> main_template;
};

// Outcome of one interpreter round trip. On failure `error` is set and the
// reply is empty; callers treat that as an ignored utterance.
struct InterpretResult {
    InterpreterReply reply;
    std::string prompt;
    std::string raw;
    double latency_s{0};
    std::optional<std::string> error;

    [[nodiscard]] bool ok() const noexcept { return !error; }
};

// Prompt building, backend call, reply extraction and clamping. Stateless
// apart from the backend; conversation history belongs to the caller.
class Interpreter {
public:
    explicit Interpreter(std::shared_ptr<InterpreterBackend> backend, InterpreterOptions options = {});

    // Throws ValidationError on an empty utterance; backend and format
    // failures are reported through InterpretResult::error.
    [[nodiscard]] InterpretResult interpret(std::string_view utterance, const Trajectory& traj, const LandmarkSet& lms,
                                            const History& history) const;

    // Second-stage round trip for the answer to a pending question.
    [[nodiscard]] InterpretResult interpret_clarification(const PendingClarification& pending, std::string_view answer,
                                                          const Trajectory& traj, const LandmarkSet& lms,
                                                          const History& history) const;

    [[nodiscard]] const InterpreterBackend& backend() const noexcept { return *backend_; }

private:
    InterpretResult run(CompletionRequest request, const Trajectory& traj, const LandmarkSet& lms) const;

    std::shared_ptr<InterpreterBackend> backend_;
    InterpreterOptions options_;
};

}  // namespace trajtalk
