#include "trajtalk/apply/params.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <utility>

#include <yaml-cpp/yaml.h>

#include "trajtalk/core/io.hpp"
#include "trajtalk/error.hpp"

namespace trajtalk {

namespace {

using Field = std::pair<std::string_view, double ApplyParams::*>;

constexpr std::array<Field, 9> kFields = {{
    {"sigma", &ApplyParams::sigma},
    {"k_p", &ApplyParams::k_p},
    {"eta", &ApplyParams::eta},
    {"rho0", &ApplyParams::rho0},
    {"v_max", &ApplyParams::v_max},
    {"v_min", &ApplyParams::v_min},
    {"f_max", &ApplyParams::f_max},
    {"delta_max", &ApplyParams::delta_max},
    {"eps_d", &ApplyParams::eps_d},
}};

double ApplyParams::*member_for(std::string_view key) {
    for (const auto& [name, member] : kFields)
        if (name == key) return member;
    return nullptr;
}

}  // namespace

void validate(const ApplyParams& p) {
    for (const auto& [name, member] : kFields) {
        const double v = p.*member;
        if (!(v > 0) || !std::isfinite(v))
            throw ValidationError("apply parameter '" + std::string(name) + "' must be positive, got " + format_double(v));
    }
    if (!(p.v_min < p.v_max)) throw ValidationError("apply parameters need v_min < v_max");
}

ApplyParams apply_params_from_yaml(std::string_view text, std::string_view origin) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
        throw ParseError(std::string(origin) + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    ApplyParams p;
    if (root.IsNull()) return p;
    if (!root.IsMap()) throw ParseError(std::string(origin) + ": parameters must be a map");
    for (const auto& kv : root) {
        const std::string key = kv.first.Scalar();
        const auto line = std::string(origin) + ":" + std::to_string(kv.first.Mark().line + 1) + ": ";
        auto member = member_for(key);
        if (!member) throw ParseError(line + "unknown apply parameter '" + key + "'");
        const std::string s = kv.second.IsScalar() ? kv.second.Scalar() : std::string();
        double v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
            throw ParseError(line + "apply parameter '" + key + "' must be a number");
        p.*member = v;
    }
    validate(p);
    return p;
}

ApplyParams load_apply_params(const std::filesystem::path& path) {
    return apply_params_from_yaml(read_file(path), path.string());
}

ApplyParams apply_params_from_json(const nlohmann::json& j) {
    ApplyParams p;
    if (j.is_null()) return p;
    if (!j.is_object()) throw ParseError("apply parameters must be an object");
    for (const auto& [key, value] : j.items()) {
        auto member = member_for(key);
        if (!member) throw ParseError("unknown apply parameter '" + key + "'");
        if (!value.is_number()) throw ParseError("apply parameter '" + key + "' must be a number");
        p.*member = value.get<double>();
    }
    validate(p);
    return p;
}

nlohmann::json to_json(const ApplyParams& p) {
    nlohmann::json j;
    for (const auto& [name, member] : kFields) j[std::string(name)] = p.*member;
    return j;
}

}  // namespace trajtalk
