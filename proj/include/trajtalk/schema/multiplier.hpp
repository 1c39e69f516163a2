#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace trajtalk {

// Largest factor a single utterance may apply (and its reciprocal the smallest).
inline constexpr double kMaxChangeFactor = 3.0;

// Positive dimensionless scale factor relative to the current value.
// Text form: a decimal when >= 1 ("2.0"), "1/x" when < 1 ("1/2.0").
class Multiplier {
public:
    // Throws ParseError unless value is finite and > 0.
    explicit Multiplier(double value);

    // Accepts "<decimal>" or "1/<decimal>"; throws ParseError naming the token.
    [[nodiscard]] static Multiplier parse(std::string_view text);

    [[nodiscard]] double value() const noexcept { return value_; }
    [[nodiscard]] bool is_identity() const noexcept { return value_ == 1.0; }
    [[nodiscard]] Multiplier reciprocal() const { return Multiplier(1.0 / value_); }
    [[nodiscard]] Multiplier clamped(double lo = 1.0 / kMaxChangeFactor, double hi = kMaxChangeFactor) const;

    // Decreases render the denominator with at most 4 significant digits.
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const Multiplier&, const Multiplier&) = default;
    friend auto operator<=>(const Multiplier&, const Multiplier&) = default;

private:
    double value_;
};

}  // namespace trajtalk
