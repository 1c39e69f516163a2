#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trajtalk/interp/history.hpp"
#include "trajtalk/schema/reply.hpp"

namespace trajtalk {

// What the rule grammar may look at besides the utterance.
struct MockContext {
    std::vector<std::string> landmark_names;
    std::vector<std::optional<std::string>> waypoint_labels;  // nearest landmark per waypoint
};

// Case-insensitive keyword grammar standing in for the LLM (table in
// docs/mock-grammar.md). Pure: same inputs, same reply.
[[nodiscard]] InterpreterReply mock_interpret(std::string_view utterance, const MockContext& context,
                                              const History& history);

}  // namespace trajtalk
