#pragma once

#include <span>
#include <string>
#include <string_view>

#include "trajtalk/interp/history.hpp"

namespace trajtalk::prompt {

// Version tag and SHA-256 of the embedded main prompt asset. A mismatch with
// the embedded text fails the unit tests, so edits to the asset are deliberate.
inline constexpr std::string_view kMainVersion = "main_v1";
inline constexpr std::string_view kMainSha256 = "eda4ea9ec5c46d91ec684f6824e7b7090fac9f669ac90bc17a2725970fd7d02b";

[[nodiscard]] std::string_view main_template() noexcept;
[[nodiscard]] std::string_view clarification_template() noexcept;

// History section in the style of the prompt's worked examples; "" when empty.
[[nodiscard]] std::string render_history(const History& history);

// Fills the main template's slots (trajectory YAML, utterance, history and the
// landmark list). `tmpl` defaults to the embedded asset.
[[nodiscard]] std::string build_main_prompt(std::string_view context_yaml, std::string_view utterance,
                                            const History& history, std::span<const std::string> landmark_names,
                                            std::string_view tmpl = main_template());

// Short second-stage prompt; throws ValidationError on an empty answer.
[[nodiscard]] std::string build_clarification_prompt(std::string_view question, std::string_view answer,
                                                     std::string_view context_yaml,
                                                     std::string_view tmpl = clarification_template());

}  // namespace trajtalk::prompt
