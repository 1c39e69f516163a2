#include "trajtalk/interp/backend.hpp"

#include <algorithm>
#include <cstdlib>

#include <httplib.h>
#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include "trajtalk/core/io.hpp"
#include "trajtalk/error.hpp"
#include "trajtalk/interp/mock.hpp"

namespace trajtalk {

namespace {

std::string normalize_key(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string env_or_empty(const char* name) {
    const char* v = std::getenv(name);
    return v ? std::string(v) : std::string();
}

}  // namespace

std::string MockBackend::complete(const CompletionRequest& request) {
    History history;
    if (request.history) history.record(*request.history);
    const MockContext ctx{request.landmark_names, request.waypoint_labels};
    const auto reply = mock_interpret(request.utterance, ctx, history);
    return render_reply(reply.spec, reply.feedback);
}

ScriptedBackend::ScriptedBackend(std::map<std::string, std::string> replies) {
    for (auto& [k, v] : replies) replies_[normalize_key(k)] = std::move(v);
}

ScriptedBackend ScriptedBackend::parse(std::string_view yaml_text, std::string_view origin) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(yaml_text));
    } catch (const YAML::Exception& e) {
        throw ParseError(std::string(origin) + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    const YAML::Node replies = root.IsMap() ? root["replies"] : YAML::Node();
    if (!replies.IsMap()) throw ParseError(std::string(origin) + ": expected a 'replies' map of utterance -> raw reply");
    std::map<std::string, std::string> out;
    for (const auto& kv : replies) {
        if (!kv.second.IsScalar() && !kv.second.IsNull())
            throw ParseError(std::string(origin) + ":" + std::to_string(kv.second.Mark().line + 1) +
                             ": scripted reply must be text");
        out[kv.first.Scalar()] = kv.second.IsNull() ? std::string() : kv.second.Scalar();
    }
    return ScriptedBackend(std::move(out));
}

ScriptedBackend ScriptedBackend::load(const std::filesystem::path& path) {
    return parse(read_file(path), path.string());
}

std::string ScriptedBackend::complete(const CompletionRequest& request) {
    auto it = replies_.find(normalize_key(request.utterance));
    if (it == replies_.end()) throw BackendError("no scripted reply for '" + request.utterance + "'");
    return it->second;
}

RemoteBackend::RemoteBackend(Config config) : config_(std::move(config)) {
    const auto scheme_end = config_.url.find("://");
    if (scheme_end == std::string::npos) throw BackendError("LLM url must start with http:// or https://");
    const auto path_start = config_.url.find('/', scheme_end + 3);
    origin_ = config_.url.substr(0, path_start);
    path_ = path_start == std::string::npos ? std::string() : config_.url.substr(path_start);
    while (!path_.empty() && path_.back() == '/') path_.pop_back();
    if (!path_.ends_with("/chat/completions")) path_ += "/chat/completions";
}

RemoteBackend::Config RemoteBackend::config_from_env() {
    Config c;
    c.url = env_or_empty("BRIDGE_LLM_URL");
    c.model = env_or_empty("BRIDGE_LLM_MODEL");
    c.api_key = env_or_empty("BRIDGE_LLM_API_KEY");
    if (c.url.empty()) throw BackendError("BRIDGE_LLM_URL is not set");
    if (c.model.empty()) throw BackendError("BRIDGE_LLM_MODEL is not set");
    return c;
}

std::string RemoteBackend::complete(const CompletionRequest& request) {
    httplib::Client client(origin_);
    const auto secs = static_cast<time_t>(config_.timeout_s);
    const auto usecs = static_cast<time_t>((config_.timeout_s - static_cast<double>(secs)) * 1e6);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);

    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);
    const nlohmann::json body = {
        {"model", config_.model},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", request.prompt}}})},
        {"temperature", 0},
    };
    auto res = client.Post(path_, headers, body.dump(), "application/json");
    if (!res) throw BackendError("LLM request failed: " + httplib::to_string(res.error()));
    if (res->status != 200)
        throw BackendError("LLM request returned HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
    try {
        const auto j = nlohmann::json::parse(res->body);
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw BackendError(std::string("unexpected LLM response body: ") + e.what());
    }
}

BackendKind parse_backend_kind(std::string_view text) {
    if (text == "mock") return BackendKind::mock;
    if (text == "scripted") return BackendKind::scripted;
    if (text == "llm") return BackendKind::llm;
    throw ParseError("unknown backend '" + std::string(text) + "' (expected llm, mock or scripted)");
}

std::string_view to_string(BackendKind kind) noexcept {
    switch (kind) {
        case BackendKind::mock: return "mock";
        case BackendKind::scripted: return "scripted";
        case BackendKind::llm: return "llm";
    }
    return "mock";
}

std::shared_ptr<InterpreterBackend> make_backend(BackendKind kind, const std::optional<std::filesystem::path>& script) {
    switch (kind) {
        case BackendKind::mock: return std::make_shared<MockBackend>();
        case BackendKind::scripted:
            if (!script) throw ParseError("scripted backend needs a replies file");
            return std::make_shared<ScriptedBackend>(ScriptedBackend::load(*script));
        case BackendKind::llm: return std::make_shared<RemoteBackend>(RemoteBackend::config_from_env());
    }
    throw ParseError("unknown backend");
}

}  // namespace trajtalk
