#include "trajtalk/schema/reply.hpp"

#include <algorithm>
#include <sstream>

#include <spdlog/spdlog.h>

#include "trajtalk/error.hpp"

namespace trajtalk {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::optional<std::string> first_nonempty_line(std::string_view text) {
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        const auto line = trim(text.substr(pos, end - pos));
        if (!line.empty()) return std::string(line);
        pos = end + 1;
    }
    return std::nullopt;
}

std::optional<std::string> last_nonempty_line(std::string_view text) {
    std::optional<std::string> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        const auto line = trim(text.substr(pos, end - pos));
        if (!line.empty()) out = std::string(line);
        pos = end + 1;
    }
    return out;
}

// Strips the indentation shared by every non-blank line.
std::string dedent(std::string_view block) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= block.size()) {
        const std::size_t end = std::min(block.find('\n', pos), block.size());
        lines.push_back(block.substr(pos, end - pos));
        pos = end + 1;
    }
    std::size_t common = std::string_view::npos;
    for (auto l : lines) {
        if (trim(l).empty()) continue;
        common = std::min(common, l.find_first_not_of(" \t"));
    }
    if (common == std::string_view::npos) common = 0;
    std::string out;
    for (auto l : lines) {
        if (l.size() >= common) l.remove_prefix(common);
        else l = {};
        out.append(l);
        out += '\n';
    }
    return out;
}

struct Fenced {
    std::string_view body;
    std::string_view before;
    std::string_view after;
};

std::optional<Fenced> find_fence(std::string_view raw) {
    const std::size_t open = raw.find("```");
    if (open == std::string_view::npos) return std::nullopt;
    std::size_t body_start = raw.find('\n', open);
    if (body_start == std::string_view::npos) body_start = raw.size();
    else ++body_start;
    // Anything between the fence and the newline is a language tag ("yaml").
    const std::size_t close = raw.find("```", body_start);
    Fenced f;
    f.before = raw.substr(0, open);
    if (close == std::string_view::npos) {
        f.body = raw.substr(body_start);
        f.after = {};
    } else {
        f.body = raw.substr(body_start, close - body_start);
        f.after = raw.substr(close + 3);
    }
    return f;
}

}  // namespace

InterpreterReply extract_reply(std::string_view raw_text, const ParseOptions& options) {
    InterpreterReply reply;
    const auto fenced = find_fence(raw_text);
    if (!fenced) {
        reply.feedback = first_nonempty_line(raw_text);
        return reply;
    }
    try {
        reply.spec = parse_spec(dedent(fenced->body), options, &reply.warnings);
    } catch (const ParseError& e) {
        throw ParseError(std::string("interpreter reply has an unparseable yaml block: ") + e.what());
    }
    reply.feedback = first_nonempty_line(fenced->after);
    if (!reply.feedback) reply.feedback = last_nonempty_line(fenced->before);
    reply.needs_clarification = reply.spec.global.clarification;
    if (reply.needs_clarification) {
        if (reply.spec.has_changes()) {
            const std::string msg = "clarification requested together with changes; dropping the changes";
            spdlog::warn("{}", msg);
            reply.warnings.push_back(msg);
            ModificationSpec cleared;
            cleared.global.clarification = true;
            reply.spec = cleared;
        }
        if (!reply.feedback) reply.feedback = std::string(kDefaultClarifyingQuestion);
    }
    return reply;
}

std::string render_reply(const ModificationSpec& spec, const std::optional<std::string>& feedback) {
    std::string out;
    const std::string yaml = serialize_spec(spec);
    if (!yaml.empty()) out += "```yaml\n" + yaml + "```\n";
    if (feedback) out += *feedback + "\n";
    return out;
}

}  // namespace trajtalk
