#include "trajtalk/schema/spec.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include <spdlog/spdlog.h>
#include <yaml-cpp/yaml.h>

#include "trajtalk/error.hpp"

namespace trajtalk {

bool ModificationSpec::changes_velocity() const noexcept {
    if (global.velocity) return true;
    for (const auto& [_, lc] : landmarks)
        if (lc.velocity) return true;
    for (const auto& [_, wc] : waypoints)
        if (wc.velocity) return true;
    return false;
}

bool ModificationSpec::changes_force() const noexcept {
    if (global.force) return true;
    for (const auto& [_, lc] : landmarks)
        if (lc.force) return true;
    for (const auto& [_, wc] : waypoints)
        if (wc.force) return true;
    return false;
}

bool ModificationSpec::changes_position() const noexcept {
    return std::any_of(landmarks.begin(), landmarks.end(), [](const auto& kv) { return kv.second.attract.has_value(); });
}

bool ModificationSpec::has_changes() const noexcept {
    return global.stop || changes_velocity() || changes_force() || changes_position();
}

namespace {

std::string where(const YAML::Node& node) { return "line " + std::to_string(node.Mark().line + 1); }

void warn(std::vector<std::string>* sink, std::string msg) {
    spdlog::warn("modification yaml: {}", msg);
    if (sink) sink->push_back(std::move(msg));
}

std::optional<Multiplier> multiplier_field(const YAML::Node& value, const std::string& field) {
    if (!value.IsScalar()) throw ParseError(where(value) + ": field '" + field + "' must be a multiplier");
    try {
        Multiplier m = Multiplier::parse(value.Scalar());
        if (m.is_identity()) return std::nullopt;
        return m;
    } catch (const ParseError& e) {
        throw ParseError(where(value) + ": " + e.what());
    }
}

bool bool_field(const YAML::Node& value, const std::string& field) {
    if (value.IsScalar()) {
        std::string s = value.Scalar();
        std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
        if (s == "true") return true;
        if (s == "false") return false;
    }
    throw ParseError(where(value) + ": field '" + field + "' must be true or false");
}

// Iterates a block's fields in document order, warning on repeats.
template <typename Fn>
void for_each_field(const YAML::Node& block, const std::string& key, std::vector<std::string>* warnings, Fn&& fn) {
    if (block.IsNull()) return;
    if (!block.IsMap()) throw ParseError(where(block) + ": entry '" + key + "' must be a map of fields");
    std::vector<std::string> seen;
    for (const auto& kv : block) {
        const std::string field = kv.first.Scalar();
        if (std::find(seen.begin(), seen.end(), field) != seen.end())
            warn(warnings, "duplicate field '" + field + "' in '" + key + "'; last occurrence wins");
        seen.push_back(field);
        fn(field, kv.second);
    }
}

std::optional<std::size_t> waypoint_index(const std::string& key, const YAML::Node& node) {
    constexpr std::string_view kPrefix = "waypoint";
    if (!key.starts_with(kPrefix)) return std::nullopt;
    std::string_view rest = std::string_view(key).substr(kPrefix.size());
    if (rest.empty() || !std::isspace(static_cast<unsigned char>(rest.front())))
        throw ParseError(where(node) + ": waypoint key '" + key + "' needs an integer index");
    while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.front()))) rest.remove_prefix(1);
    std::size_t idx = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), idx);
    if (ec != std::errc() || ptr != rest.data() + rest.size() || idx == 0)
        throw ParseError(where(node) + ": waypoint key '" + key + "' needs a positive integer index");
    return idx;
}

}  // namespace

ModificationSpec parse_spec(std::string_view yaml_text, const ParseOptions& options, std::vector<std::string>* warnings) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(yaml_text));
    } catch (const YAML::Exception& e) {
        throw ParseError("line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    ModificationSpec spec;
    if (root.IsNull()) return spec;
    if (!root.IsMap()) throw ParseError(where(root) + ": modification must be a map of entries");

    std::vector<std::string> seen;
    for (const auto& kv : root) {
        if (!kv.first.IsScalar()) throw ParseError(where(kv.first) + ": entry keys must be plain text");
        const std::string key = kv.first.Scalar();
        const YAML::Node& block = kv.second;
        if (std::find(seen.begin(), seen.end(), key) != seen.end())
            warn(warnings, "duplicate entry '" + key + "'; last occurrence wins");
        seen.push_back(key);

        if (key == "global") {
            GlobalChange g;
            for_each_field(block, key, warnings, [&](const std::string& field, const YAML::Node& v) {
                if (field == "velocity") g.velocity = multiplier_field(v, field);
                else if (field == "force") g.force = multiplier_field(v, field);
                else if (field == "stop") g.stop = bool_field(v, field);
                else if (field == "clarification") g.clarification = bool_field(v, field);
                else throw ParseError(where(v) + ": unknown field '" + field + "' in 'global'");
            });
            spec.global = g;
        } else if (auto idx = waypoint_index(key, kv.first)) {
            WaypointChange w;
            w.index = *idx;
            for_each_field(block, key, warnings, [&](const std::string& field, const YAML::Node& v) {
                if (field == "velocity") w.velocity = multiplier_field(v, field);
                else if (field == "force") w.force = multiplier_field(v, field);
                else throw ParseError(where(v) + ": unknown field '" + field + "' in '" + key + "'");
            });
            if (w.empty()) spec.waypoints.erase(*idx);
            else spec.waypoints[*idx] = w;
        } else {
            if (key.empty()) throw ParseError(where(kv.first) + ": empty entry key");
            if (options.vocabulary &&
                std::find(options.vocabulary->begin(), options.vocabulary->end(), key) == options.vocabulary->end()) {
                if (!options.drop_unknown_landmarks)
                    throw ParseError(where(kv.first) + ": unknown entry '" + key + "'");
                warn(warnings, "dropping unknown landmark '" + key + "'");
                continue;
            }
            LandmarkChange lc;
            for_each_field(block, key, warnings, [&](const std::string& field, const YAML::Node& v) {
                if (field == "attract") lc.attract = multiplier_field(v, field);
                else if (field == "velocity") lc.velocity = multiplier_field(v, field);
                else if (field == "force") lc.force = multiplier_field(v, field);
                else throw ParseError(where(v) + ": unknown field '" + field + "' in '" + key + "'");
            });
            if (lc.empty()) spec.landmarks.erase(key);
            else spec.landmarks[key] = lc;
        }
    }
    return spec;
}

std::string serialize_spec(const ModificationSpec& spec) {
    std::string out;
    auto field = [&out](std::string_view name, const std::optional<Multiplier>& m) {
        if (m && !m->is_identity()) out += "    " + std::string(name) + ": " + m->to_string() + "\n";
    };
    auto live = [](const std::optional<Multiplier>& m) { return m && !m->is_identity(); };
    for (const auto& [idx, wc] : spec.waypoints) {
        if (!live(wc.force) && !live(wc.velocity)) continue;
        out += "waypoint " + std::to_string(idx) + ":\n";
        field("force", wc.force);
        field("velocity", wc.velocity);
    }
    const auto& g = spec.global;
    const bool any_global = live(g.velocity) || live(g.force) || g.stop || g.clarification;
    if (any_global) {
        out += "global:\n";
        out += g.clarification ? "    clarification: true\n" : "    clarification: false\n";
        field("force", g.force);
        if (g.stop) out += "    stop: true\n";
        field("velocity", g.velocity);
    }
    for (const auto& [name, lc] : spec.landmarks) {
        if (!live(lc.attract) && !live(lc.force) && !live(lc.velocity)) continue;
        out += name + ":\n";
        field("attract", lc.attract);
        field("force", lc.force);
        field("velocity", lc.velocity);
    }
    return out;
}

namespace {

template <typename Fn>
ModificationSpec map_multipliers(const ModificationSpec& spec, Fn&& fn) {
    ModificationSpec out = spec;
    auto apply = [&](std::optional<Multiplier>& m) {
        if (m) m = fn(*m);
    };
    apply(out.global.velocity);
    apply(out.global.force);
    for (auto& [_, lc] : out.landmarks) {
        apply(lc.attract);
        apply(lc.velocity);
        apply(lc.force);
    }
    for (auto& [_, wc] : out.waypoints) {
        apply(wc.velocity);
        apply(wc.force);
    }
    return out;
}

}  // namespace

ModificationSpec clamp_spec(const ModificationSpec& spec) {
    return map_multipliers(spec, [](const Multiplier& m) { return m.clamped(); });
}

ModificationSpec reciprocal_spec(const ModificationSpec& spec) {
    ModificationSpec out = map_multipliers(spec, [](const Multiplier& m) { return m.reciprocal(); });
    out.global.stop = false;
    out.global.clarification = false;
    return out;
}

}  // namespace trajtalk
