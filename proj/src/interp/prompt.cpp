#include "trajtalk/interp/prompt.hpp"

#include <map>

#include "trajtalk/error.hpp"

namespace trajtalk::prompt {

namespace detail {
std::string_view embedded_main() noexcept;
std::string_view embedded_clarification() noexcept;
}  // namespace detail

namespace {

// Single pass over the template, so slot-like text inside values stays literal.
std::string fill(std::string_view tmpl, const std::map<std::string_view, std::string_view>& slots) {
    std::string out;
    out.reserve(tmpl.size() + 256);
    std::size_t pos = 0;
    while (pos < tmpl.size()) {
        const std::size_t open = tmpl.find("{{", pos);
        if (open == std::string_view::npos) break;
        const std::size_t close = tmpl.find("}}", open + 2);
        if (close == std::string_view::npos) break;
        out.append(tmpl.substr(pos, open - pos));
        const auto name = tmpl.substr(open + 2, close - open - 2);
        if (auto it = slots.find(name); it != slots.end()) out.append(it->second);
        else out.append(tmpl.substr(open, close + 2 - open));
        pos = close + 2;
    }
    out.append(tmpl.substr(std::min(pos, tmpl.size())));
    return out;
}

std::string indent(std::string_view text, std::string_view prefix) {
    std::string out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        out.append(prefix);
        out.append(text.substr(pos, end - pos));
        out += '\n';
        pos = end + 1;
    }
    return out;
}

}  // namespace

std::string_view main_template() noexcept { return detail::embedded_main(); }
std::string_view clarification_template() noexcept { return detail::embedded_clarification(); }

std::string render_history(const History& history) {
    if (!history.last()) return {};
    const auto& turn = *history.last();
    std::string out = "Previous Utterance: \"" + turn.utterance + "\"\nPrevious Response:\n";
    out += indent(turn.reply_yaml, "    ");
    if (turn.feedback) out += "    " + *turn.feedback + "\n";
    if (!out.empty() && out.back() == '\n') out.pop_back();
    return out;
}

std::string build_main_prompt(std::string_view context_yaml, std::string_view utterance, const History& history,
                              std::span<const std::string> landmark_names, std::string_view tmpl) {
    std::string landmarks;
    for (const auto& n : landmark_names) {
        if (!landmarks.empty()) landmarks += ", ";
        landmarks += n;
    }
    const std::string hist = render_history(history);
    return fill(tmpl, {{"trajectory_yaml", context_yaml},
                       {"utterance", utterance},
                       {"history", hist},
                       {"landmarks", landmarks}});
}

std::string build_clarification_prompt(std::string_view question, std::string_view answer,
                                       std::string_view context_yaml, std::string_view tmpl) {
    if (answer.find_first_not_of(" \t\r\n") == std::string_view::npos)
        throw ValidationError("clarification answer must be nonempty");
    return fill(tmpl, {{"trajectory_yaml", context_yaml}, {"question", question}, {"answer", answer}});
}

}  // namespace trajtalk::prompt
