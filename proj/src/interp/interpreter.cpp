#include "trajtalk/interp/interpreter.hpp"

#include <chrono>

#include <spdlog/spdlog.h>

#include "trajtalk/core/context.hpp"
#include "trajtalk/error.hpp"
#include "trajtalk/interp/prompt.hpp"

namespace trajtalk {

namespace {

bool blank(std::string_view s) { return s.find_first_not_of(" \t\r\n") == std::string_view::npos; }

}  // namespace

Interpreter::Interpreter(std::shared_ptr<InterpreterBackend> backend, InterpreterOptions options)
    : backend_(std::move(backend)), options_(std::move(options)) {
    if (!backend_) throw ValidationError("interpreter needs a backend");
}

InterpretResult Interpreter::interpret(std::string_view utterance, const Trajectory& traj, const LandmarkSet& lms,
                                       const History& history) const {
    if (blank(utterance)) throw ValidationError("utterance must be nonempty");
    CompletionRequest req;
    req.kind = CompletionRequest::Kind::main;
    req.utterance = std::string(utterance);
    req.history = history.last();
    req.landmark_names = lms.names();
    req.waypoint_labels = landmark_labels(traj, lms, options_.proximity_threshold);
    const auto context = to_context_yaml(traj, lms, options_.proximity_threshold);
    req.prompt = options_.main_template
                     ? prompt::build_main_prompt(context, utterance, history, req.landmark_names, *options_.main_template)
                     : prompt::build_main_prompt(context, utterance, history, req.landmark_names);
    return run(std::move(req), traj, lms);
}

InterpretResult Interpreter::interpret_clarification(const PendingClarification& pending, std::string_view answer,
                                                     const Trajectory& traj, const LandmarkSet& lms,
                                                     const History& history) const {
    CompletionRequest req;
    req.kind = CompletionRequest::Kind::clarification;
    req.utterance = std::string(answer);
    req.question = pending.question;
    req.history = history.last();
    req.landmark_names = lms.names();
    req.waypoint_labels = landmark_labels(traj, lms, options_.proximity_threshold);
    req.prompt = prompt::build_clarification_prompt(pending.question, answer,
                                                    to_context_yaml(traj, lms, options_.proximity_threshold));
    return run(std::move(req), traj, lms);
}

InterpretResult Interpreter::run(CompletionRequest request, const Trajectory& traj, const LandmarkSet& lms) const {
    InterpretResult result;
    const auto t0 = std::chrono::steady_clock::now();
    result.prompt = request.prompt;
    try {
        result.raw = backend_->complete(request);
        const auto vocabulary = lms.names();
        ParseOptions opts;
        opts.vocabulary = &vocabulary;
        opts.drop_unknown_landmarks = true;
        result.reply = extract_reply(result.raw, opts);
        for (auto it = result.reply.spec.waypoints.begin(); it != result.reply.spec.waypoints.end();) {
            if (it->first > traj.size()) {
                const auto msg = "dropping waypoint " + std::to_string(it->first) + " outside 1.." +
                                 std::to_string(traj.size());
                spdlog::warn("{}", msg);
                result.reply.warnings.push_back(msg);
                it = result.reply.spec.waypoints.erase(it);
            } else {
                ++it;
            }
        }
        result.reply.spec = clamp_spec(result.reply.spec);
    } catch (const BackendError& e) {
        result.error = std::string("interpreter unavailable: ") + e.what();
    } catch (const ParseError& e) {
        result.error = std::string("interpreter format error: ") + e.what();
    }
    if (result.error) {
        spdlog::warn("{} (raw reply: {})", *result.error, result.raw);
        result.reply = InterpreterReply{};
    }
    result.latency_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

}  // namespace trajtalk
