#include "trajtalk/gateway/server.hpp"

#include <sys/socket.h>

#include <atomic>
#include <charconv>
#include <chrono>
#include <condition_variable>
#include <fstream>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <thread>
#include <vector>

#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <spdlog/spdlog.h>

#include "trajtalk/core/io.hpp"
#include "trajtalk/error.hpp"
#include "trajtalk/interp/interpreter.hpp"
#include "trajtalk/session/clock.hpp"
#include "trajtalk/session/session.hpp"

namespace trajtalk {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

struct HttpError : Error {
    unsigned status;
    HttpError(unsigned s, const std::string& what) : Error(what), status(s) {}
};

std::vector<std::string_view> split_path(std::string_view path) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < path.size()) {
        while (i < path.size() && path[i] == '/') ++i;
        const std::size_t j = path.find('/', i);
        const std::size_t end = j == std::string_view::npos ? path.size() : j;
        if (end > i) out.push_back(path.substr(i, end - i));
        i = end;
    }
    return out;
}

std::string_view strip_query(std::string_view target) { return target.substr(0, target.find('?')); }

std::optional<std::uint64_t> query_uint(std::string_view target, std::string_view key) {
    std::size_t pos = target.find('?');
    while (pos != std::string_view::npos && pos < target.size()) {
        const std::size_t start = pos + 1;
        std::size_t end = start;
        while (end < target.size() && target[end] != '&') ++end;
        const std::string_view kv(target.data() + start, end - start);
        const auto eq = kv.find('=');
        if (eq != std::string_view::npos && kv.substr(0, eq) == key) {
            const char* first = kv.data() + eq + 1;
            const char* last = kv.data() + kv.size();
            std::uint64_t v = 0;
            const auto [stop, err] = std::from_chars(first, last, v);
            if (err != std::errc() || stop != last) return std::nullopt;
            return v;
        }
        pos = end;
    }
    return std::nullopt;
}

nlohmann::json parse_body(std::string_view body) {
    if (body.empty()) return nlohmann::json::object();
    try {
        auto j = nlohmann::json::parse(body);
        if (!j.is_object()) throw HttpError(422, "request body must be a JSON object");
        return j;
    } catch (const nlohmann::json::parse_error& e) {
        throw HttpError(422, std::string("request body is not valid JSON: ") + e.what());
    }
}

std::string required_text(const nlohmann::json& body, const char* key) {
    if (!body.contains(key) || !body[key].is_string()) throw HttpError(422, std::string("field '") + key + "' must be a string");
    std::string s = body[key].get<std::string>();
    if (s.find_first_not_of(" \t\r\n") == std::string::npos) throw HttpError(422, std::string("field '") + key + "' is empty");
    return s;
}

nlohmann::json state_json(const std::string& id, const Session& session) {
    const SessionState st = session.state();
    const State ex = interpolate_state(st.current, st.progress_time);
    nlohmann::json pending = nullptr;
    if (st.pending) pending = st.pending->question;
    return {{"id", id},
            {"mode", std::string(to_string(session.config().mode))},
            {"phase", std::string(to_string(st.phase))},
            {"progress", progress_fraction(st.current, st.progress_time)},
            {"progress_time", st.progress_time},
            {"executor", {{"pos", {ex.pos.x, ex.pos.y, ex.pos.z}}, {"vel", ex.vel}, {"force", ex.force}}},
            {"trajectory_hash", trajectory_hash(st.current)},
            {"original_hash", trajectory_hash(st.original)},
            {"current_trajectory", to_json(st.current)},
            {"original_trajectory", to_json(st.original)},
            {"landmarks", to_json(session.landmarks())},
            {"pending_question", pending}};
}

nlohmann::json outcome_json(const Outcome& o, const Session& session) {
    const SessionState st = session.state();
    nlohmann::json feedback = nullptr;
    if (o.feedback) feedback = *o.feedback;
    nlohmann::json pending = nullptr;
    if (st.pending) pending = st.pending->question;
    return {{"feedback", feedback},
            {"modified", o.modified},
            {"phase", std::string(to_string(o.phase))},
            {"trajectory_hash", trajectory_hash(st.current)},
            {"pending_question", pending}};
}

std::string new_id() {
    static std::mutex mu;
    static std::mt19937_64 rng{std::random_device{}()};
    std::lock_guard lock(mu);
    static constexpr char kHex[] = "0123456789abcdef";
    std::uint64_t v = rng();
    std::string id;
    for (int i = 0; i < 12; ++i, v >>= 4) id += kHex[v & 0xf];
    return id;
}

}  // namespace

struct Server::Impl {
    ServiceConfig config;
    std::shared_ptr<const Interpreter> interpreter;
    std::shared_ptr<Clock> clock = std::make_shared<SystemClock>();

    mutable std::mutex sessions_mu;
    std::map<std::string, std::shared_ptr<Session>, std::less<>> sessions;

    net::io_context ioc;
    std::optional<tcp::acceptor> acceptor;
    std::atomic<bool> running{false};
    std::thread accept_thread;
    std::thread ticker_thread;

    std::mutex stop_mu;
    std::condition_variable stop_cv;

    std::mutex conn_mu;
    std::condition_variable conn_cv;
    std::set<int> open_fds;
    std::size_t active{0};

    std::shared_ptr<Session> find(std::string_view id) const {
        std::lock_guard lock(sessions_mu);
        auto it = sessions.find(id);
        if (it == sessions.end()) throw HttpError(404, "unknown session '" + std::string(id) + "'");
        return it->second;
    }

    HttpReply create(const nlohmann::json& body);
    HttpReply route(std::string_view method, std::string_view target, std::string_view body);
    // route() with errors mapped to status codes.
    HttpReply dispatch(std::string_view method, std::string_view target, std::string_view body);
    void accept_loop();
    void ticker_loop();
    void serve_connection(tcp::socket sock);
    void serve_events(tcp::socket sock, const http::request<http::string_body>& req);

    // Sleeps up to `s` seconds; returns false once the server is stopping.
    bool nap(double s) {
        std::unique_lock lock(stop_mu);
        return !stop_cv.wait_for(lock, std::chrono::duration<double>(s), [&] { return !running.load(); });
    }
};

HttpReply Server::Impl::create(const nlohmann::json& body) {
    if (!body.contains("mode") || !body["mode"].is_string()) throw HttpError(422, "field 'mode' must be a string");
    const Mode mode = parse_mode(body["mode"].get<std::string>());
    if (!body.contains("trajectory")) throw HttpError(422, "field 'trajectory' is required");
    const auto& tj = body["trajectory"];
    Trajectory traj = tj.is_string() ? parse_trajectory(tj.get<std::string>(), "trajectory") : trajectory_from_json(tj);
    LandmarkSet lms;
    if (body.contains("landmarks")) {
        const auto& lj = body["landmarks"];
        lms = lj.is_string() ? parse_landmarks(lj.get<std::string>(), "landmarks") : landmarks_from_json(lj);
    }
    SessionConfig sc;
    sc.mode = mode;
    sc.params = config.params;
    sc.execution = config.execution;
    if (body.contains("params")) {
        nlohmann::json merged = to_json(config.params);
        if (!body["params"].is_object()) throw HttpError(422, "field 'params' must be an object");
        merged.update(body["params"]);
        sc.params = apply_params_from_json(merged);
    }
    if (body.contains("pause_s")) {
        if (!body["pause_s"].is_number() || !(body["pause_s"].get<double>() >= 0))
            throw HttpError(422, "field 'pause_s' must be a number >= 0");
        sc.no_modification_pause_s = body["pause_s"].get<double>();
    }

    auto session = std::make_shared<Session>(std::move(traj), std::move(lms), sc, interpreter, clock);
    std::string id;
    {
        std::lock_guard lock(sessions_mu);
        do id = new_id();
        while (sessions.count(id));
        sessions.emplace(id, session);
    }
    if (config.log_dir) {
        std::filesystem::create_directories(*config.log_dir);
        auto out = std::make_shared<std::ofstream>(*config.log_dir / (id + ".jsonl"), std::ios::app);
        if (!*out) spdlog::warn("cannot open event log for session {}", id);
        else session->set_listener([out](const Event& e) { *out << to_json(e).dump() << '\n' << std::flush; });
    }
    spdlog::info("session {} created ({})", id, to_string(mode));
    return {201,
            {{"id", id},
             {"mode", std::string(to_string(mode))},
             {"phase", std::string(to_string(session->phase()))},
             {"trajectory_hash", trajectory_hash(session->state().current)}}};
}

HttpReply Server::Impl::route(std::string_view method, std::string_view target, std::string_view body) {
    const auto segs = split_path(strip_query(target));
    auto only = [&](std::string_view m) {
        if (method != m) throw HttpError(405, "method " + std::string(method) + " not allowed here");
    };
    if (segs.size() == 1 && segs[0] == "health") {
        only("GET");
        return {200, {{"ok", true}, {"backend", interpreter ? std::string(interpreter->backend().name()) : "none"}}};
    }
    if (segs.empty() || segs[0] != "sessions") throw HttpError(404, "no route for " + std::string(target));
    if (segs.size() == 1) {
        if (method == "GET") {
            std::lock_guard lock(sessions_mu);
            auto ids = nlohmann::json::array();
            for (const auto& [id, s] : sessions) ids.push_back(id);
            return {200, {{"sessions", ids}}};
        }
        only("POST");
        return create(parse_body(body));
    }
    const std::string id(segs[1]);
    auto session = find(id);
    if (segs.size() == 2 || (segs.size() == 3 && segs[2] == "state")) {
        only("GET");
        return {200, state_json(id, *session)};
    }
    if (segs.size() != 3) throw HttpError(404, "no route for " + std::string(target));
    const std::string_view action = segs[2];
    if (action == "utterance") {
        only("POST");
        const std::string text = required_text(parse_body(body), "text");
        return {200, outcome_json(session->submit_utterance(text), *session)};
    }
    if (action == "clarification") {
        only("POST");
        const std::string text = required_text(parse_body(body), "text");
        return {200, outcome_json(session->answer_clarification(text), *session)};
    }
    if (action == "stop") {
        only("POST");
        (void)session->stop();
        return {200, state_json(id, *session)};
    }
    if (action == "log") {
        only("GET");
        auto events = nlohmann::json::array();
        for (const auto& e : session->log()) events.push_back(to_json(e));
        return {200, {{"id", id}, {"events", events}}};
    }
    if (action == "events") throw HttpError(426, "events is a WebSocket endpoint");
    throw HttpError(404, "no route for " + std::string(target));
}

HttpReply Server::Impl::dispatch(std::string_view method, std::string_view target, std::string_view body) {
    try {
        return route(method, target, body);
    } catch (const HttpError& e) {
        return {e.status, {{"error", e.what()}}};
    } catch (const StateError& e) {
        return {409, {{"error", e.what()}}};
    } catch (const ParseError& e) {
        return {422, {{"error", e.what()}}};
    } catch (const ValidationError& e) {
        return {422, {{"error", e.what()}}};
    } catch (const RangeError& e) {
        return {422, {{"error", e.what()}}};
    } catch (const BackendError& e) {
        return {503, {{"error", e.what()}}};
    } catch (const nlohmann::json::exception& e) {
        return {422, {{"error", e.what()}}};
    } catch (const std::exception& e) {
        return {500, {{"error", e.what()}}};
    }
}

void Server::Impl::ticker_loop() {
    auto last = std::chrono::steady_clock::now();
    while (nap(1.0 / config.tick_hz)) {
        const auto now = std::chrono::steady_clock::now();
        const double dt = std::chrono::duration<double>(now - last).count();
        last = now;
        if (!(dt > 0)) continue;
        std::vector<std::shared_ptr<Session>> live;
        {
            std::lock_guard lock(sessions_mu);
            for (const auto& [id, s] : sessions) live.push_back(s);
        }
        for (const auto& s : live) (void)s->tick(dt);
    }
}

void Server::Impl::accept_loop() {
    while (running) {
        tcp::socket sock(ioc);
        beast::error_code ec;
        acceptor->accept(sock, ec);
        if (!running) break;
        if (ec) {
            spdlog::warn("accept failed: {}", ec.message());
            continue;
        }
        const int fd = sock.native_handle();
        {
            std::lock_guard lock(conn_mu);
            open_fds.insert(fd);
            ++active;
        }
        std::thread([this, fd, s = std::move(sock)]() mutable {
            try {
                serve_connection(std::move(s));
            } catch (const std::exception& e) {
                spdlog::warn("connection error: {}", e.what());
            }
            std::lock_guard lock(conn_mu);
            open_fds.erase(fd);
            --active;
            conn_cv.notify_all();
        }).detach();
    }
}

namespace {

http::response<http::string_body> to_response(const HttpReply& reply, unsigned version, bool keep_alive) {
    http::response<http::string_body> res{static_cast<http::status>(reply.status), version};
    res.set(http::field::content_type, "application/json");
    res.set(http::field::access_control_allow_origin, "*");
    res.keep_alive(keep_alive);
    res.body() = reply.body.dump();
    res.prepare_payload();
    return res;
}

}  // namespace

void Server::Impl::serve_connection(tcp::socket sock) {
    beast::flat_buffer buf;
    beast::error_code ec;
    for (;;) {
        http::request<http::string_body> req;
        http::read(sock, buf, req, ec);
        if (ec) break;
        if (websocket::is_upgrade(req)) {
            serve_events(std::move(sock), req);
            return;
        }
        if (req.method() == http::verb::options) {
            http::response<http::empty_body> res{http::status::no_content, req.version()};
            res.set(http::field::access_control_allow_origin, "*");
            res.set(http::field::access_control_allow_methods, "GET, POST, OPTIONS");
            res.set(http::field::access_control_allow_headers, "Content-Type");
            res.keep_alive(req.keep_alive());
            http::write(sock, res, ec);
        } else {
            const HttpReply reply =
                dispatch(std::string_view(req.method_string().data(), req.method_string().size()),
                         std::string_view(req.target().data(), req.target().size()), req.body());
            auto res = to_response(reply, req.version(), req.keep_alive());
            http::write(sock, res, ec);
        }
        if (ec || !req.keep_alive()) break;
    }
    sock.shutdown(tcp::socket::shutdown_send, ec);
}

void Server::Impl::serve_events(tcp::socket sock, const http::request<http::string_body>& req) {
    const std::string_view target(req.target().data(), req.target().size());
    const auto segs = split_path(strip_query(target));
    std::shared_ptr<Session> session;
    std::string id;
    if (segs.size() == 3 && segs[0] == "sessions" && segs[2] == "events") {
        id = std::string(segs[1]);
        std::lock_guard lock(sessions_mu);
        if (auto it = sessions.find(id); it != sessions.end()) session = it->second;
    }
    beast::error_code ec;
    if (!session) {
        auto res = to_response({404, {{"error", "unknown session or not an events endpoint"}}}, req.version(), false);
        http::write(sock, res, ec);
        return;
    }

    websocket::stream<tcp::socket> ws(std::move(sock));
    ws.accept(req, ec);
    if (ec) return;
    ws.text(true);
    std::uint64_t last = query_uint(target, "since").value_or(0);
    const double period = 1.0 / config.broadcast_hz;
    do {
        // Drain client frames so close and ping get answered; their content is ignored.
        while (ws.next_layer().available(ec) > 0 && !ec) {
            beast::flat_buffer in;
            ws.read(in, ec);
            if (ec) return;
        }
        if (ec) return;
        for (const auto& e : session->events_since(last)) {
            const std::string msg = nlohmann::json{{"type", "event"}, {"event", to_json(e)}}.dump();
            ws.write(net::buffer(msg), ec);
            if (ec) return;
            last = e.seq;
        }
        const SessionState st = session->state();
        const State ex = interpolate_state(st.current, st.progress_time);
        const std::string msg = nlohmann::json{{"type", "state"},
                                               {"phase", std::string(to_string(st.phase))},
                                               {"progress", progress_fraction(st.current, st.progress_time)},
                                               {"executor",
                                                {{"pos", {ex.pos.x, ex.pos.y, ex.pos.z}},
                                                 {"vel", ex.vel},
                                                 {"force", ex.force}}},
                                               {"trajectory_hash", trajectory_hash(st.current)},
                                               {"last_seq", last}}
                                    .dump();
        ws.write(net::buffer(msg), ec);
        if (ec) return;
    } while (nap(period));
    ws.close(websocket::close_code::going_away, ec);
}

Server::Server(ServiceConfig config, std::shared_ptr<InterpreterBackend> backend) : impl_(std::make_unique<Impl>()) {
    validate(config.params);
    if (!(config.broadcast_hz > 0) || !(config.tick_hz > 0)) throw ValidationError("broadcast and tick rates must be > 0");
    if (!backend) backend = make_backend(config.backend, config.script);
    InterpreterOptions opts;
    if (config.prompt_path) opts.main_template = read_file(*config.prompt_path);
    impl_->interpreter = std::make_shared<Interpreter>(std::move(backend), opts);
    impl_->config = std::move(config);
}

Server::~Server() { stop(); }

std::uint16_t Server::start() {
    auto& im = *impl_;
    if (im.running) throw StateError("server already started");
    const auto addr = net::ip::make_address(im.config.address);
    im.acceptor.emplace(im.ioc);
    const tcp::endpoint ep(addr, im.config.port);
    im.acceptor->open(ep.protocol());
    im.acceptor->set_option(net::socket_base::reuse_address(true));
    im.acceptor->bind(ep);
    im.acceptor->listen();
    const auto port = im.acceptor->local_endpoint().port();
    im.running = true;
    im.accept_thread = std::thread([&im] { im.accept_loop(); });
    im.ticker_thread = std::thread([&im] { im.ticker_loop(); });
    spdlog::info("listening on {}:{} (backend {})", im.config.address, port, im.interpreter->backend().name());
    return port;
}

void Server::wait() {
    std::unique_lock lock(impl_->stop_mu);
    impl_->stop_cv.wait(lock, [&] { return !impl_->running.load(); });
}

void Server::stop() {
    auto& im = *impl_;
    {
        std::lock_guard lock(im.stop_mu);
        if (!im.running.exchange(false)) return;
    }
    im.stop_cv.notify_all();
    ::shutdown(im.acceptor->native_handle(), SHUT_RDWR);
    if (im.accept_thread.joinable()) im.accept_thread.join();
    if (im.ticker_thread.joinable()) im.ticker_thread.join();
    {
        std::unique_lock lock(im.conn_mu);
        for (int fd : im.open_fds) ::shutdown(fd, SHUT_RDWR);
        im.conn_cv.wait(lock, [&] { return im.active == 0; });
    }
    beast::error_code ec;
    im.acceptor->close(ec);
}

HttpReply Server::handle(std::string_view method, std::string_view target, std::string_view body) {
    return impl_->dispatch(method, target, body);
}

std::size_t Server::session_count() const {
    std::lock_guard lock(impl_->sessions_mu);
    return impl_->sessions.size();
}

const ServiceConfig& Server::config() const noexcept { return impl_->config; }

}  // namespace trajtalk
