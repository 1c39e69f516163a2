#include "trajtalk/schema/multiplier.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "trajtalk/core/io.hpp"
#include "trajtalk/error.hpp"

namespace trajtalk {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool parse_decimal(std::string_view s, double& out) {
    s = trim(s);
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

// "2" -> "2.0"; leaves exponent forms alone.
std::string with_decimal_point(std::string s) {
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

}  // namespace

Multiplier::Multiplier(double value) : value_(value) {
    if (!std::isfinite(value) || !(value > 0)) throw ParseError("multiplier must be a positive number, got " + format_double(value));
}

Multiplier Multiplier::parse(std::string_view text) {
    const std::string_view s = trim(text);
    double v = 0;
    if (s.starts_with("1/")) {
        double denom = 0;
        if (!parse_decimal(s.substr(2), denom) || !(denom > 0))
            throw ParseError("malformed multiplier '" + std::string(text) + "': expected 1/<positive decimal>");
        v = 1.0 / denom;
    } else if (!parse_decimal(s, v)) {
        throw ParseError("malformed multiplier '" + std::string(text) + "'");
    }
    if (!(v > 0) || !std::isfinite(v)) throw ParseError("multiplier '" + std::string(text) + "' must be > 0");
    return Multiplier(v);
}

Multiplier Multiplier::clamped(double lo, double hi) const { return Multiplier(std::clamp(value_, lo, hi)); }

std::string Multiplier::to_string() const {
    if (value_ >= 1.0) return with_decimal_point(format_double(value_));
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.4g", 1.0 / value_);
    return "1/" + with_decimal_point(buf.data());
}

}  // namespace trajtalk
