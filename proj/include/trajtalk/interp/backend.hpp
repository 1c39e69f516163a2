#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trajtalk/interp/history.hpp"

namespace trajtalk {

// Everything a backend might need for one completion. The remote backend only
// sends `prompt`; offline backends read the structured fields instead of
// re-parsing prompt text.
struct CompletionRequest {
    enum class Kind { main, clarification };

    Kind kind{Kind::main};
    std::string prompt;
    std::string utterance;  // the user's words (their answer, for clarification)
    std::optional<std::string> question;  // pending question, for clarification
    std::optional<ConversationTurn> history;
    std::vector<std::string> landmark_names;
    std::vector<std::optional<std::string>> waypoint_labels;
};

// Produces raw model text: a fenced YAML block followed by one sentence.
class InterpreterBackend {
public:
    virtual ~InterpreterBackend() = default;

    // Throws BackendError on failure or timeout.
    [[nodiscard]] virtual std::string complete(const CompletionRequest& request) = 0;
    [[nodiscard]] virtual double timeout_s() const noexcept { return 10.0; }
    [[nodiscard]] virtual std::string_view name() const noexcept = 0;
};

// Deterministic rule-grammar stand-in for the LLM.
class MockBackend final : public InterpreterBackend {
public:
    [[nodiscard]] std::string complete(const CompletionRequest& request) override;
    [[nodiscard]] std::string_view name() const noexcept override { return "mock"; }
};

// Canned raw replies keyed by utterance (case and surrounding whitespace ignored).
class ScriptedBackend final : public InterpreterBackend {
public:
    explicit ScriptedBackend(std::map<std::string, std::string> replies);

    // File: YAML map `replies: {utterance: raw reply text}`.
    [[nodiscard]] static ScriptedBackend load(const std::filesystem::path& path);
    [[nodiscard]] static ScriptedBackend parse(std::string_view yaml_text, std::string_view origin = "<script>");

    // Throws BackendError for an utterance without a scripted reply.
    [[nodiscard]] std::string complete(const CompletionRequest& request) override;
    [[nodiscard]] std::string_view name() const noexcept override { return "scripted"; }

private:
    std::map<std::string, std::string> replies_;
};

// OpenAI-style chat-completions client.
class RemoteBackend final : public InterpreterBackend {
public:
    struct Config {
        std::string url;  // base URL; "/chat/completions" is appended unless present
        std::string model;
        std::string api_key;
        double timeout_s{10.0};
    };

    explicit RemoteBackend(Config config);

    // Reads BRIDGE_LLM_URL, BRIDGE_LLM_MODEL and BRIDGE_LLM_API_KEY.
    // Throws BackendError when the URL or model is missing.
    [[nodiscard]] static Config config_from_env();

    [[nodiscard]] std::string complete(const CompletionRequest& request) override;
    [[nodiscard]] double timeout_s() const noexcept override { return config_.timeout_s; }
    [[nodiscard]] std::string_view name() const noexcept override { return "llm"; }

private:
    Config config_;
    std::string origin_;  // scheme://host[:port]
    std::string path_;
};

enum class BackendKind { mock, scripted, llm };

[[nodiscard]] BackendKind parse_backend_kind(std::string_view text);
[[nodiscard]] std::string_view to_string(BackendKind kind) noexcept;

// `script` is required for BackendKind::scripted; llm reads the environment.
[[nodiscard]] std::shared_ptr<InterpreterBackend> make_backend(BackendKind kind,
                                                               const std::optional<std::filesystem::path>& script = {});

}  // namespace trajtalk
