#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "trajtalk/apply/kernels.hpp"
#include "trajtalk/apply/params.hpp"
#include "trajtalk/interp/backend.hpp"

namespace trajtalk {

struct ServiceConfig {
    std::string address{"127.0.0.1"};
    std::uint16_t port{8080};  // 0 picks a free port
    BackendKind backend{BackendKind::mock};
    std::optional<std::filesystem::path> script;       // replies file for the scripted backend
    ApplyParams params;
    std::optional<std::filesystem::path> prompt_path;  // replaces the embedded main prompt
    std::optional<std::filesystem::path> log_dir;      // append-only <id>.jsonl per session
    double broadcast_hz{20.0};
    double tick_hz{50.0};
    Execution execution{Execution::parallel};
};

struct HttpReply {
    unsigned status{200};
    nlohmann::json body;
};

// HTTP + WebSocket front end over in-memory sessions. One thread per
// connection, plus one ticker thread advancing every running session in real
// time. Sessions only ever talk to the configured backend.
class Server {
public:
    // A null backend is built from the config.
    explicit Server(ServiceConfig config, std::shared_ptr<InterpreterBackend> backend = nullptr);
    ~Server();

    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    // Binds and starts serving in background threads; returns the bound port.
    std::uint16_t start();
    // Blocks until stop() is called from another thread or a signal handler.
    void wait();
    void stop();

    // REST routing without a socket; `target` is the request path.
    [[nodiscard]] HttpReply handle(std::string_view method, std::string_view target, std::string_view body);

    [[nodiscard]] std::size_t session_count() const;
    [[nodiscard]] const ServiceConfig& config() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace trajtalk
