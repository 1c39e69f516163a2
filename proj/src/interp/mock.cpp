#include "trajtalk/interp/mock.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "trajtalk/schema/spec.hpp"

namespace trajtalk {

namespace {

constexpr double kDefaultFactor = 2.0;
constexpr double kSmallFactor = 1.25;
constexpr double kLargeFactor = 3.0;

// Lowercased, punctuation turned into spaces, padded so " word " matches whole words.
std::string normalize(std::string_view text) {
    std::string out = " ";
    bool space = true;
    for (char raw : text) {
        const auto c = static_cast<unsigned char>(raw);
        if (std::isalnum(c) || c == '/') {
            out += static_cast<char>(std::tolower(c));
            space = false;
        } else if (!space) {
            out += ' ';
            space = true;
        }
    }
    if (!space) out += ' ';
    return out;
}

class Words {
public:
    explicit Words(std::string_view utterance) : text_(normalize(utterance)) {}

    [[nodiscard]] std::size_t find(std::string_view phrase) const {
        return text_.find(" " + std::string(phrase) + " ");
    }
    [[nodiscard]] bool has(std::string_view phrase) const { return find(phrase) != std::string::npos; }
    template <std::size_t N>
    [[nodiscard]] bool any(const std::array<std::string_view, N>& phrases) const {
        return std::any_of(phrases.begin(), phrases.end(), [&](auto p) { return has(p); });
    }
    [[nodiscard]] bool blank() const { return text_.find_first_not_of(' ') == std::string::npos; }

private:
    std::string text_;
};

constexpr std::array<std::string_view, 6> kSmall = {"a little", "slightly", "a bit", "a tad", "little bit", "somewhat"};
constexpr std::array<std::string_view, 4> kLarge = {"a lot", "way", "really", "very"};

constexpr std::array<std::string_view, 6> kFaster = {"faster", "quicker", "speed up", "hurry", "too slow", "more quickly"};
constexpr std::array<std::string_view, 6> kSlower = {"slower", "slow down", "too fast", "too quick", "more slowly", "less fast"};
constexpr std::array<std::string_view, 10> kHarder = {"harder", "firmer", "more pressure", "more force", "stronger",
                                                      "too soft", "too gentle", "too light", "push more", "press more"};
constexpr std::array<std::string_view, 12> kSofter = {"softer", "gentler", "gently", "lighter", "less pressure",
                                                      "less force", "too hard", "too rough", "too strong", "too firm",
                                                      "too much pressure", "too much force"};
constexpr std::array<std::string_view, 6> kCloser = {"closer to", "closer", "toward", "towards", "nearer to", "nearer"};
constexpr std::array<std::string_view, 5> kAway = {"away from", "further from", "farther from", "further away",
                                                   "farther away"};
constexpr std::array<std::string_view, 5> kUndo = {"undo", "forget what i just said", "take that back", "revert",
                                                   "go back to before"};
constexpr std::array<std::string_view, 5> kAgain = {"more", "again", "less", "even more", "keep going"};

struct Mention {
    std::size_t at;
    std::string name;
};

std::string last_word(const std::string& name) {
    const auto sp = name.rfind(' ');
    return sp == std::string::npos ? name : name.substr(sp + 1);
}

// Landmarks named in the utterance, in order of appearance. A bare "wrist"
// resolves to the sided landmark the trajectory passes first.
std::vector<std::string> mentioned_landmarks(const Words& words, const MockContext& ctx) {
    std::vector<Mention> found;
    std::vector<std::string> covered_parts;
    for (const auto& name : ctx.landmark_names) {
        if (auto at = words.find(name); at != std::string::npos) {
            found.push_back({at, name});
            covered_parts.push_back(last_word(name));
        }
    }
    std::vector<std::string> parts;
    for (const auto& name : ctx.landmark_names) {
        auto part = last_word(name);
        if (part != name && std::find(parts.begin(), parts.end(), part) == parts.end()) parts.push_back(part);
    }
    for (const auto& part : parts) {
        if (std::find(covered_parts.begin(), covered_parts.end(), part) != covered_parts.end()) continue;
        const auto at = words.find(part);
        if (at == std::string::npos) continue;
        std::optional<std::string> pick;
        for (const auto& label : ctx.waypoint_labels) {
            if (label && last_word(*label) == part) {
                pick = *label;
                break;
            }
        }
        if (!pick) {
            std::vector<std::string> candidates;
            for (const auto& name : ctx.landmark_names)
                if (last_word(name) == part) candidates.push_back(name);
            pick = *std::min_element(candidates.begin(), candidates.end());
        }
        found.push_back({at, *pick});
    }
    std::sort(found.begin(), found.end(), [](const Mention& a, const Mention& b) { return a.at < b.at; });
    std::vector<std::string> out;
    for (auto& m : found)
        if (std::find(out.begin(), out.end(), m.name) == out.end()) out.push_back(std::move(m.name));
    return out;
}

InterpreterReply question(const std::vector<std::string>& landmarks) {
    InterpreterReply r;
    r.spec.global.clarification = true;
    r.needs_clarification = true;
    if (landmarks.empty()) r.feedback = std::string(kDefaultClarifyingQuestion);
    else r.feedback = "Could you tell me more about what you'd like me to change near your " + landmarks.front() + "?";
    return r;
}

InterpreterReply change(ModificationSpec spec, std::string sentence) {
    InterpreterReply r;
    r.spec = std::move(spec);
    r.feedback = std::move(sentence);
    return r;
}

std::optional<ModificationSpec> last_spec(const History& history) {
    if (!history.last()) return std::nullopt;
    try {
        auto spec = parse_spec(history.last()->reply_yaml);
        if (!spec.has_changes() || spec.global.stop) return std::nullopt;
        return spec;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::string where_suffix(const std::vector<std::string>& landmarks) {
    return landmarks.empty() ? std::string() : " near your " + landmarks.front();
}

}  // namespace

InterpreterReply mock_interpret(std::string_view utterance, const MockContext& context, const History& history) {
    const Words words(utterance);
    const auto landmarks = mentioned_landmarks(words, context);

    if (words.any(kUndo)) {
        auto prev = last_spec(history);
        if (!prev) return question(landmarks);
        return change(reciprocal_spec(*prev), "I'm undoing the previous change.");
    }

    if (words.has("stop") && !words.has("stop here") && !words.has("stop there")) {
        ModificationSpec spec;
        spec.global.stop = true;
        return change(std::move(spec), "I'm stopping now.");
    }

    double factor = kDefaultFactor;
    if (words.any(kSmall)) factor = kSmallFactor;
    // "much" intensifies ("much faster") except in complaints ("too much pressure").
    else if (words.any(kLarge) || (words.has("much") && !words.has("too much"))) factor = kLargeFactor;
    const Multiplier up(factor);
    const Multiplier down = up.reciprocal();

    const bool faster = words.any(kFaster);
    const bool slower = words.any(kSlower);
    const bool harder = words.any(kHarder);
    const bool softer = words.any(kSofter);
    const bool away = words.any(kAway);
    const bool closer = !away && words.any(kCloser);

    if ((faster && slower) || (harder && softer)) return question(landmarks);

    ModificationSpec spec;
    std::string sentence;

    if (closer || away) {
        if (landmarks.empty()) return question(landmarks);
        for (const auto& lm : landmarks) spec.landmarks[lm].attract = closer ? up : down;
        sentence = closer ? "I'm moving closer to your " + landmarks.front() + "."
                          : "I'm moving away from your " + landmarks.front() + ".";
    }

    // Speed and pressure attach to the named landmark unless the utterance is
    // already about position, in which case they are global.
    const bool local = !landmarks.empty() && !(closer || away);
    auto set_velocity = [&](const Multiplier& m) {
        if (local)
            for (const auto& lm : landmarks) spec.landmarks[lm].velocity = m;
        else spec.global.velocity = m;
    };
    auto set_force = [&](const Multiplier& m) {
        if (local)
            for (const auto& lm : landmarks) spec.landmarks[lm].force = m;
        else spec.global.force = m;
    };
    const std::string near = local ? where_suffix(landmarks) : std::string();
    if (faster || slower) {
        set_velocity(faster ? up : down);
        if (sentence.empty()) sentence = std::string(faster ? "I'm increasing the speed" : "I'm decreasing the speed") + near + ".";
    }
    if (harder || softer) {
        set_force(harder ? up : down);
        if (sentence.empty())
            sentence = std::string(harder ? "I'm increasing the pressure" : "I'm decreasing the pressure") + near + ".";
    }

    if (spec.has_changes()) return change(std::move(spec), std::move(sentence));

    // "More" / "again" with nothing else repeats the last change's direction
    // at this utterance's magnitude; "less" reverses it.
    if (words.any(kAgain)) {
        if (auto prev = last_spec(history)) {
            const bool reverse = words.has("less") && !words.has("more") && !words.has("again");
            auto repeat = [&](std::optional<Multiplier>& m) {
                if (m) m = (m->value() > 1.0) != reverse ? up : down;
            };
            prev->global.clarification = false;
            repeat(prev->global.velocity);
            repeat(prev->global.force);
            for (auto& [_, lc] : prev->landmarks) {
                repeat(lc.attract);
                repeat(lc.velocity);
                repeat(lc.force);
            }
            for (auto& [_, wc] : prev->waypoints) {
                repeat(wc.velocity);
                repeat(wc.force);
            }
            return change(std::move(*prev), reverse ? "I'm easing off that change." : "I'm making that change again.");
        }
    }

    return question(landmarks);
}

}  // namespace trajtalk
