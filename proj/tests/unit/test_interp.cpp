#include <doctest.h>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "trajtalk/core/context.hpp"
#include "trajtalk/core/io.hpp"
#include "trajtalk/error.hpp"
#include "trajtalk/interp/backend.hpp"
#include "trajtalk/interp/interpreter.hpp"
#include "trajtalk/interp/mock.hpp"
#include "trajtalk/interp/prompt.hpp"

using namespace trajtalk;

namespace {

const LandmarkSet& body() {
    static const LandmarkSet lms = load_landmarks(TRAJTALK_DATA_DIR "/landmarks.yaml");
    return lms;
}

const Trajectory& feeding() {
    static const Trajectory t = load_trajectory(TRAJTALK_DATA_DIR "/feeding_trajectory.yaml");
    return t;
}

MockContext context() { return {body().names(), landmark_labels(feeding(), body())}; }

InterpreterReply mock(std::string_view utterance, const History& h = {}) {
    return mock_interpret(utterance, context(), h);
}

History after(std::string_view utterance, const InterpreterReply& r) {
    History h;
    h.record({std::string(utterance), serialize_spec(r.spec), r.feedback});
    return h;
}

// Minimal chat-completions endpoint on a free local port.
class FakeLlm {
public:
    explicit FakeLlm(std::string content, int status = 200, int delay_ms = 0) {
        server_.Post("/v1/chat/completions", [=, this](const httplib::Request& req, httplib::Response& res) {
            ++hits;
            last_body = req.body;
            last_auth = req.get_header_value("Authorization");
            if (delay_ms) std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
            res.status = status;
            const nlohmann::json body = {{"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}}};
            res.set_content(status == 200 ? body.dump() : std::string("boom"), "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~FakeLlm() {
        server_.stop();
        thread_.join();
    }
    [[nodiscard]] std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }

    std::atomic<int> hits{0};
    std::string last_body;
    std::string last_auth;

private:
    httplib::Server server_;
    int port_{0};
    std::thread thread_;
};

}  // namespace

TEST_CASE("embedded main prompt matches its recorded hash and the asset file") {
    CHECK(sha256_hex(prompt::main_template()) == prompt::kMainSha256);
    CHECK(read_file(TRAJTALK_PROMPT_DIR "/main_v1.txt") == prompt::main_template());
    CHECK(read_file(TRAJTALK_PROMPT_DIR "/clarification_v1.txt") == prompt::clarification_template());
    CHECK(prompt::main_template().find("The following is the user's utterance:") != std::string_view::npos);
    CHECK(prompt::clarification_template().size() < prompt::main_template().size());
}

TEST_CASE("build_main_prompt fills every slot") {
    History h;
    h.record({"go faster", "global:\n    clarification: false\n    velocity: 2.0\n", "I'm speeding up."});
    const std::vector<std::string> names = {"left wrist", "mouth"};
    const auto p = prompt::build_main_prompt("waypoint 1:\n    nearest landmark: none", "{{history}} slower", h, names);
    // Only the slot-like text inside the utterance survives, verbatim.
    CHECK(p.find("{{") == p.rfind("{{"));
    CHECK(p.find("The following is the user's utterance:\n{{history}} slower\n") != std::string::npos);
    CHECK(p.find("left wrist, mouth") != std::string::npos);
    CHECK(p.find("Previous Utterance: \"go faster\"") != std::string::npos);
    CHECK(p.find("    I'm speeding up.") != std::string::npos);
    CHECK(p.find("waypoint 1:\n    nearest landmark: none") != std::string::npos);
    CHECK(prompt::render_history(History{}).empty());
}

TEST_CASE("build_clarification_prompt") {
    const auto p = prompt::build_clarification_prompt("Which part?", "near my mouth", "waypoint 1:");
    CHECK(p.find("Your question: Which part?") != std::string::npos);
    CHECK(p.find("Their answer: near my mouth") != std::string::npos);
    CHECK_THROWS_AS((void)prompt::build_clarification_prompt("Which part?", "  ", "waypoint 1:"), ValidationError);
}

TEST_CASE("History keeps only the latest turn") {
    History h;
    CHECK_FALSE(h.last());
    h.record({"a", "", std::nullopt});
    h.record({"b", "x", std::string("y")});
    REQUIRE(h.last());
    CHECK(h.last()->utterance == "b");
    h.clear();
    CHECK_FALSE(h.last());
}

TEST_CASE("mock grammar examples") {
    auto r = mock("go a lot faster");
    CHECK(r.spec.global.velocity->value() == 3.0);
    CHECK_FALSE(r.needs_clarification);

    r = mock("go faster");
    CHECK(r.spec.global.velocity->value() == 2.0);
    CHECK(r.feedback == "I'm increasing the speed.");

    r = mock("slower near my left wrist");
    CHECK(r.spec.landmarks.at("left wrist").velocity->value() == 0.5);
    CHECK_FALSE(r.spec.global.velocity);

    r = mock("a little closer to my mouth");
    CHECK(r.spec.landmarks.at("mouth").attract->value() == 1.25);

    r = mock("That's too much pressure");
    CHECK(r.spec.global.force->value() == 0.5);
    r = mock("much harder");
    CHECK(r.spec.global.force->value() == 3.0);

    r = mock("stop");
    CHECK(r.spec.global.stop);
    for (const char* unclear : {"blargh", "This doesn't feel good", "stop here", "faster, no, slower", "closer"}) {
        CAPTURE(unclear);
        r = mock(unclear);
        CHECK(r.needs_clarification);
        CHECK(r.spec.global.clarification);
        CHECK_FALSE(r.spec.has_changes());
        CHECK(r.feedback);
    }
}

TEST_CASE("mock: bare body part resolves to the side the trajectory passes") {
    // The feeding trajectory starts near the left wrist.
    const auto labels = landmark_labels(feeding(), body());
    std::optional<std::string> first_wrist;
    for (const auto& l : labels)
        if (l && l->ends_with("wrist")) {
            first_wrist = l;
            break;
        }
    const auto r = mock("slower near my wrist");
    REQUIRE(r.spec.landmarks.size() == 1);
    CHECK(r.spec.landmarks.begin()->first == first_wrist.value_or("left wrist"));
}

TEST_CASE("mock: undo and repeat use the previous turn") {
    const auto away = mock("Go further from my mouth.");
    CHECK(away.spec.landmarks.at("mouth").attract->value() == 0.5);
    const auto undo = mock("Undo that.", after("Go further from my mouth.", away));
    CHECK(undo.spec.landmarks.at("mouth").attract->value() == 2.0);
    CHECK(mock("Undo that.").needs_clarification);

    const auto faster = mock("go faster");
    const auto more = mock("more", after("go faster", faster));
    CHECK(more.spec.global.velocity->value() == 2.0);
    const auto a_bit_more = mock("a bit more", after("go faster", faster));
    CHECK(a_bit_more.spec.global.velocity->value() == 1.25);
    const auto less = mock("a little less", after("go faster", faster));
    CHECK(less.spec.global.velocity->value() == 1.0 / 1.25);
    const auto closer = mock("a bit closer to my mouth");
    CHECK(mock("less", after("closer", closer)).spec.landmarks.at("mouth").attract->value() == 0.5);
}

TEST_CASE("mock: undo of any change is its reciprocal") {
    const std::vector<std::string> utterances = {"go faster", "slower near my mouth", "a lot gentler", "harder",
                                                 "a bit closer to my left elbow", "further from my right wrist"};
    for (const auto& u : utterances) {
        CAPTURE(u);
        const auto first = mock(u);
        REQUIRE(first.spec.has_changes());
        const auto undo = mock("undo", after(u, first));
        CHECK(undo.spec == reciprocal_spec(first.spec));
    }
}

TEST_CASE("mock is pure") {
    const auto h = after("go faster", mock("go faster"));
    for (const char* u : {"go faster", "more", "blargh", "undo", "slower near my wrist", "stop"}) {
        CHECK(mock(u, h).spec == mock(u, h).spec);
        CHECK(mock(u, h).feedback == mock(u, h).feedback);
    }
}

TEST_CASE("MockBackend output goes through the reply parser") {
    MockBackend b;
    CompletionRequest req;
    req.utterance = "be gentler";
    req.landmark_names = body().names();
    const auto r = extract_reply(b.complete(req));
    CHECK(r.spec.global.force->value() == 0.5);
    CHECK(r.feedback == "I'm decreasing the pressure.");
}

TEST_CASE("ScriptedBackend") {
    const auto b = ScriptedBackend::load(TRAJTALK_DATA_DIR "/replies.yaml");
    auto copy = b;
    CompletionRequest req;
    req.utterance = "  Go Faster ";
    CHECK(extract_reply(copy.complete(req)).spec.global.velocity->value() == 2.0);
    req.utterance = "never scripted";
    CHECK_THROWS_AS((void)copy.complete(req), BackendError);
    CHECK_THROWS_AS((void)ScriptedBackend::parse("- a"), ParseError);
    CHECK_THROWS_AS((void)ScriptedBackend::parse("replies: [1"), ParseError);
}

TEST_CASE("backend kinds") {
    CHECK(parse_backend_kind("mock") == BackendKind::mock);
    CHECK(parse_backend_kind("scripted") == BackendKind::scripted);
    CHECK(parse_backend_kind("llm") == BackendKind::llm);
    CHECK(to_string(BackendKind::scripted) == "scripted");
    CHECK_THROWS((void)parse_backend_kind("gpt"));
    CHECK(make_backend(BackendKind::mock)->name() == "mock");
    CHECK_THROWS((void)make_backend(BackendKind::scripted));
}

TEST_CASE("Interpreter with the mock backend") {
    const Interpreter interp(std::make_shared<MockBackend>());
    const auto r = interp.interpret("go faster", feeding(), body(), {});
    REQUIRE(r.ok());
    CHECK(r.reply.spec.global.velocity->value() == 2.0);
    CHECK(r.prompt.find("go faster") != std::string::npos);
    CHECK(r.raw.starts_with("```yaml\n"));
    CHECK(r.latency_s >= 0);
    CHECK_THROWS_AS((void)interp.interpret("   ", feeding(), body(), {}), ValidationError);

    const PendingClarification pending{"Which part?", "blargh"};
    const auto c = interp.interpret_clarification(pending, "slower near my mouth", feeding(), body(), {});
    REQUIRE(c.ok());
    CHECK(c.reply.spec.landmarks.at("mouth").velocity->value() == 0.5);
    CHECK(c.prompt.find("Their answer: slower near my mouth") != std::string::npos);
}

TEST_CASE("Interpreter clamps, drops bad entries and reports failures") {
    const auto scripted = std::make_shared<ScriptedBackend>(std::map<std::string, std::string>{
        {"wild", "```yaml\nglobal:\n  velocity: 10.0\nnose:\n  force: 2.0\nwaypoint 99:\n  force: 2.0\n```\nOk."},
        {"broken", "```yaml\nglobal:\n  velocity: quick\n```\n"},
    });
    const Interpreter interp(scripted);
    const auto r = interp.interpret("wild", feeding(), body(), {});
    REQUIRE(r.ok());
    CHECK(r.reply.spec.global.velocity->value() == 3.0);
    CHECK(r.reply.spec.landmarks.empty());
    CHECK(r.reply.spec.waypoints.empty());
    CHECK(r.reply.warnings.size() == 2);

    const auto bad = interp.interpret("broken", feeding(), body(), {});
    CHECK_FALSE(bad.ok());
    CHECK(bad.error->find("format error") != std::string::npos);
    CHECK(bad.reply.spec.empty());

    const auto missing = interp.interpret("nothing scripted", feeding(), body(), {});
    CHECK_FALSE(missing.ok());
    CHECK(missing.error->find("unavailable") != std::string::npos);

    CHECK_THROWS_AS(Interpreter(nullptr), ValidationError);
}

TEST_CASE("RemoteBackend speaks chat completions") {
    FakeLlm llm("```yaml\nmouth:\n  attract: 2.0\n```\nI'm coming closer to your mouth.");
    RemoteBackend b({llm.url(), "test-model", "secret", 5.0});
    CompletionRequest req;
    req.prompt = "PROMPT TEXT";
    const auto raw = b.complete(req);
    CHECK(extract_reply(raw).spec.landmarks.at("mouth").attract->value() == 2.0);
    CHECK(llm.hits == 1);
    const auto sent = nlohmann::json::parse(llm.last_body);
    CHECK(sent.at("model") == "test-model");
    CHECK(sent.at("messages").at(0).at("content") == "PROMPT TEXT");
    CHECK(llm.last_auth == "Bearer secret");
}

TEST_CASE("RemoteBackend failures become BackendError") {
    {
        FakeLlm llm("", 500);
        RemoteBackend b({llm.url(), "m", "", 5.0});
        CHECK_THROWS_AS((void)b.complete({}), BackendError);
    }
    {
        FakeLlm llm("late", 200, 1500);
        RemoteBackend b({llm.url(), "m", "", 0.3});
        CHECK_THROWS_AS((void)b.complete({}), BackendError);
    }
    CHECK_THROWS_AS(RemoteBackend({"localhost:1", "m", "", 1}), BackendError);
    RemoteBackend closed({"http://127.0.0.1:1", "m", "", 1});
    CHECK_THROWS_AS((void)closed.complete({}), BackendError);

    ::unsetenv("BRIDGE_LLM_URL");
    CHECK_THROWS_AS((void)RemoteBackend::config_from_env(), BackendError);
    ::setenv("BRIDGE_LLM_URL", "http://127.0.0.1:1", 1);
    ::unsetenv("BRIDGE_LLM_MODEL");
    CHECK_THROWS_AS((void)RemoteBackend::config_from_env(), BackendError);
    ::setenv("BRIDGE_LLM_MODEL", "m", 1);
    CHECK(RemoteBackend::config_from_env().model == "m");
    ::unsetenv("BRIDGE_LLM_URL");
    ::unsetenv("BRIDGE_LLM_MODEL");
}
