#include "trajtalk/core/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include "trajtalk/error.hpp"

namespace trajtalk {

namespace {

[[noreturn]] void fail_at(std::string_view origin, const YAML::Node& node, const std::string& what) {
    std::ostringstream msg;
    msg << origin << ":" << node.Mark().line + 1 << ": " << what;
    throw ParseError(msg.str());
}

double scalar_double(std::string_view origin, const YAML::Node& node, std::string_view field) {
    if (!node.IsDefined() || !node.IsScalar()) fail_at(origin, node, "field '" + std::string(field) + "' must be a number");
    const std::string& s = node.Scalar();
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        fail_at(origin, node, "field '" + std::string(field) + "' is not a number: '" + s + "'");
    return v;
}

Vec3 vec3_of(std::string_view origin, const YAML::Node& node, std::string_view field) {
    if (!node.IsSequence() || node.size() != 3) fail_at(origin, node, "field '" + std::string(field) + "' must be [x, y, z]");
    return {scalar_double(origin, node[0], field), scalar_double(origin, node[1], field),
            scalar_double(origin, node[2], field)};
}

YAML::Node load_yaml(std::string_view text, std::string_view origin) {
    try {
        return YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
        std::ostringstream msg;
        msg << origin << ":" << e.mark.line + 1 << ": " << e.msg;
        throw ParseError(msg.str());
    }
}

}  // namespace

std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

Trajectory parse_trajectory(std::string_view text, std::string_view origin) {
    const YAML::Node root = load_yaml(text, origin);
    if (!root.IsSequence()) fail_at(origin, root, "trajectory must be a list of waypoint records");
    std::vector<Waypoint> wps;
    wps.reserve(root.size());
    for (const auto& rec : root) {
        if (!rec.IsMap()) fail_at(origin, rec, "waypoint record must be a map");
        for (const auto& kv : rec) {
            const auto key = kv.first.Scalar();
            if (key != "t" && key != "pos" && key != "vel" && key != "force")
                fail_at(origin, kv.first, "unknown waypoint field '" + key + "'");
        }
        Waypoint w;
        w.t = scalar_double(origin, rec["t"], "t");
        w.pos = vec3_of(origin, rec["pos"], "pos");
        w.vel = scalar_double(origin, rec["vel"], "vel");
        w.force = scalar_double(origin, rec["force"], "force");
        wps.push_back(w);
    }
    if (auto v = validate(wps); !v.empty()) {
        std::ostringstream msg;
        msg << origin << ": invalid trajectory";
        for (const auto& viol : v) {
            msg << "\n  ";
            if (viol.index < root.size()) msg << origin << ":" << root[viol.index].Mark().line + 1 << ": ";
            msg << "waypoint " << viol.index + 1 << ": " << viol.what;
        }
        throw ValidationError(msg.str());
    }
    return Trajectory(std::move(wps));
}

LandmarkSet parse_landmarks(std::string_view text, std::string_view origin) {
    const YAML::Node root = load_yaml(text, origin);
    if (root.IsNull()) return {};
    if (!root.IsMap()) fail_at(origin, root, "landmarks must be a map of name -> [x, y, z]");
    std::vector<Landmark> lms;
    for (const auto& kv : root) {
        const auto name = kv.first.Scalar();
        for (const auto& lm : lms)
            if (lm.name == name) fail_at(origin, kv.first, "duplicate landmark '" + name + "'");
        lms.push_back({name, vec3_of(origin, kv.second, name)});
    }
    return LandmarkSet(std::move(lms));
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string() + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Trajectory load_trajectory(const std::filesystem::path& path) { return parse_trajectory(read_file(path), path.string()); }

LandmarkSet load_landmarks(const std::filesystem::path& path) { return parse_landmarks(read_file(path), path.string()); }

std::string trajectory_to_yaml(const Trajectory& traj) {
    std::string out;
    for (const auto& w : traj.waypoints()) {
        out += "- {t: " + format_double(w.t) + ", pos: [" + format_double(w.pos.x) + ", " + format_double(w.pos.y) +
               ", " + format_double(w.pos.z) + "], vel: " + format_double(w.vel) +
               ", force: " + format_double(w.force) + "}\n";
    }
    return out;
}

nlohmann::json to_json(const Trajectory& traj) {
    auto arr = nlohmann::json::array();
    for (const auto& w : traj.waypoints())
        arr.push_back({{"t", w.t}, {"pos", {w.pos.x, w.pos.y, w.pos.z}}, {"vel", w.vel}, {"force", w.force}});
    return arr;
}

nlohmann::json to_json(const LandmarkSet& lms) {
    auto obj = nlohmann::json::object();
    for (const auto& lm : lms.landmarks()) obj[lm.name] = {lm.pos.x, lm.pos.y, lm.pos.z};
    return obj;
}

Trajectory trajectory_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw ParseError("trajectory must be an array of waypoint records");
    std::vector<Waypoint> wps;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& rec = j[i];
        auto num = [&](const char* key) {
            if (!rec.is_object() || !rec.contains(key) || !rec[key].is_number())
                throw ParseError("waypoint " + std::to_string(i + 1) + ": field '" + key + "' must be a number");
            return rec[key].get<double>();
        };
        const auto& p = rec.is_object() && rec.contains("pos") ? rec["pos"] : nlohmann::json();
        if (!p.is_array() || p.size() != 3 || !p[0].is_number() || !p[1].is_number() || !p[2].is_number())
            throw ParseError("waypoint " + std::to_string(i + 1) + ": field 'pos' must be [x, y, z]");
        wps.push_back({num("t"), {p[0].get<double>(), p[1].get<double>(), p[2].get<double>()}, num("vel"), num("force")});
    }
    return Trajectory(std::move(wps));
}

LandmarkSet landmarks_from_json(const nlohmann::json& j) {
    if (j.is_null()) return {};
    if (!j.is_object()) throw ParseError("landmarks must be an object of name -> [x, y, z]");
    std::vector<Landmark> lms;
    for (const auto& [name, p] : j.items()) {
        if (!p.is_array() || p.size() != 3 || !p[0].is_number() || !p[1].is_number() || !p[2].is_number())
            throw ParseError("landmark '" + name + "' must be [x, y, z]");
        lms.push_back({name, {p[0].get<double>(), p[1].get<double>(), p[2].get<double>()}});
    }
    return LandmarkSet(std::move(lms));
}

void save_trajectory(const Trajectory& traj, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(path.string() + ": cannot write file");
    if (path.extension() == ".json") out << to_json(traj).dump(2) << '\n';
    else out << trajectory_to_yaml(traj);
}

std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out += kHex[digest[i] >> 4];
        out += kHex[digest[i] & 0xf];
    }
    return out;
}

std::string trajectory_hash(const Trajectory& traj) { return sha256_hex(trajectory_to_yaml(traj)); }

}  // namespace trajtalk
