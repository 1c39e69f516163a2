#pragma once

#include <optional>
#include <string>

namespace trajtalk {

// One completed exchange: what the user said, the YAML we answered with, and
// the sentence spoken back (if any).
struct ConversationTurn {
    std::string utterance;
    std::string reply_yaml;
    std::optional<std::string> feedback;

    friend bool operator==(const ConversationTurn&, const ConversationTurn&) = default;
};

// Holds only the most recent turn.
class History {
public:
    [[nodiscard]] const std::optional<ConversationTurn>& last() const noexcept { return last_; }
    void record(ConversationTurn turn) { last_ = std::move(turn); }
    void clear() noexcept { last_.reset(); }

private:
    std::optional<ConversationTurn> last_;
};

// Outstanding question between an unclear reply and the user's answer.
struct PendingClarification {
    std::string question;
    std::string utterance;  // what prompted the question
};

}  // namespace trajtalk
