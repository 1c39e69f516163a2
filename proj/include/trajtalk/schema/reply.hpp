#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trajtalk/schema/spec.hpp"

namespace trajtalk {

inline constexpr std::string_view kDefaultClarifyingQuestion =
    "Could you tell me more about what you'd like me to change?";

// What the interpreter made of one utterance.
// needs_clarification implies no changes in `spec` and a question in `feedback`.
struct InterpreterReply {
    ModificationSpec spec;
    std::optional<std::string> feedback;  // assurance or clarifying question
    bool needs_clarification{false};
    std::vector<std::string> warnings;
};

// Pulls the fenced ```yaml block and the sentence after it out of raw model text.
// Throws ParseError when a fenced block exists but does not parse.
[[nodiscard]] InterpreterReply extract_reply(std::string_view raw_text, const ParseOptions& options = {});

// Raw text in the format extract_reply understands: fenced YAML then the sentence.
[[nodiscard]] std::string render_reply(const ModificationSpec& spec, const std::optional<std::string>& feedback);

}  // namespace trajtalk
