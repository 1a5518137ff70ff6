#pragma once

// Labeled multi-part scattering point clouds: the body-frame description of a
// target that the kinematics module animates.

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "airguard/common.hpp"
#include "airguard/rng.hpp"

namespace airguard {

enum class TargetClass { UAV, Bird };
enum class PartRole { Body, Rotor, Wing };

inline std::string to_string(TargetClass c) { return c == TargetClass::UAV ? "UAV" : "Bird"; }

inline TargetClass parse_target_class(const std::string& s) {
    if (s == "UAV") return TargetClass::UAV;
    if (s == "Bird") return TargetClass::Bird;
    throw ParseError("unknown target_class: " + s);
}

inline std::string to_string(PartRole r) {
    switch (r) {
        case PartRole::Body: return "body";
        case PartRole::Rotor: return "rotor";
        case PartRole::Wing: return "wing";
    }
    return "body";
}

inline PartRole parse_part_role(const std::string& s) {
    if (s == "body") return PartRole::Body;
    if (s == "rotor") return PartRole::Rotor;
    if (s == "wing") return PartRole::Wing;
    throw ParseError("unknown part role: " + s);
}

struct Part {
    PartRole role = PartRole::Body;
    std::vector<Vec3> points;
    // Rotation axis through axis_a and axis_b; both absent for the body.
    std::optional<Vec3> axis_a;
    std::optional<Vec3> axis_b;

    [[nodiscard]] bool is_moving() const noexcept { return role != PartRole::Body; }

    /// Unit direction (a - b) / |a - b|.
    [[nodiscard]] Vec3 axis_direction() const {
        if (!axis_a || !axis_b) throw ValidationError("part has no rotation axis");
        const Vec3 d = *axis_a - *axis_b;
        const double n = d.norm();
        if (!(n > 0.0)) throw ValidationError("degenerate rotation axis (axis_a == axis_b)");
        return d / n;
    }
};

struct ScatteringPointCloud {
    TargetClass target_class = TargetClass::UAV;
    std::string target_name;
    std::vector<Part> parts;  // parts[0] is the body

    [[nodiscard]] std::size_t point_count() const noexcept {
        std::size_t n = 0;
        for (const auto& p : parts) n += p.points.size();
        return n;
    }

    [[nodiscard]] std::size_t moving_part_count() const noexcept {
        return parts.empty() ? 0 : parts.size() - 1;
    }

    /// All points in part order (the global scatterer index order used downstream).
    [[nodiscard]] std::vector<Vec3> flattened_points() const {
        std::vector<Vec3> out;
        out.reserve(point_count());
        for (const auto& p : parts) out.insert(out.end(), p.points.begin(), p.points.end());
        return out;
    }

    [[nodiscard]] Vec3 centroid() const {
        Vec3 sum = Vec3::Zero();
        std::size_t n = 0;
        for (const auto& p : parts) {
            for (const auto& q : p.points) {
                sum += q;
                ++n;
            }
        }
        return n == 0 ? sum : Vec3(sum / static_cast<double>(n));
    }
};

struct CloudValidation {
    // Centroid must lie within this fraction of the bounding-box diagonal of the origin.
    double centroid_tolerance = 0.05;
};

/// Throws ValidationError when any structural invariant of the cloud is violated.
inline void validate_cloud(const ScatteringPointCloud& cloud, const CloudValidation& opts = {}) {
    if (cloud.parts.empty()) throw ValidationError("cloud has no parts");
    const Part& body = cloud.parts.front();
    if (body.role != PartRole::Body) throw ValidationError("first part must be the body");
    if (body.axis_a || body.axis_b) throw ValidationError("body part must not carry a rotation axis");

    const PartRole moving_role = cloud.target_class == TargetClass::UAV ? PartRole::Rotor : PartRole::Wing;
    for (std::size_t i = 0; i < cloud.parts.size(); ++i) {
        const Part& p = cloud.parts[i];
        if (p.points.empty()) throw ValidationError("part " + std::to_string(i) + " is empty");
        for (const auto& q : p.points) {
            if (!q.allFinite()) throw ValidationError("non-finite coordinate in part " + std::to_string(i));
        }
        if (i == 0) continue;
        if (p.role != moving_role) {
            throw ValidationError("part " + std::to_string(i) + " has role " + to_string(p.role) + " in a " +
                                  to_string(cloud.target_class) + " cloud");
        }
        if (!p.axis_a || !p.axis_b) throw ValidationError("moving part " + std::to_string(i) + " lacks an axis");
        if (*p.axis_a == *p.axis_b) throw ValidationError("moving part " + std::to_string(i) + " has a zero-length axis");
    }

    const std::size_t moving = cloud.moving_part_count();
    if (cloud.target_class == TargetClass::Bird && moving != 2) {
        throw ValidationError("bird clouds need exactly 2 wings, got " + std::to_string(moving));
    }
    if (cloud.target_class == TargetClass::UAV && moving < 1) {
        throw ValidationError("UAV clouds need at least one rotor");
    }

    // Disjointness: no scatterer position may belong to two different parts.
    std::vector<std::tuple<double, double, double, std::size_t>> keyed;
    keyed.reserve(cloud.point_count());
    for (std::size_t i = 0; i < cloud.parts.size(); ++i) {
        for (const auto& q : cloud.parts[i].points) keyed.emplace_back(q.x(), q.y(), q.z(), i);
    }
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t k = 1; k < keyed.size(); ++k) {
        const auto& [x0, y0, z0, p0] = keyed[k - 1];
        const auto& [x1, y1, z1, p1] = keyed[k];
        if (x0 == x1 && y0 == y1 && z0 == z1 && p0 != p1) {
            throw ValidationError("parts " + std::to_string(p0) + " and " + std::to_string(p1) + " share a point");
        }
    }

    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = -lo;
    for (const auto& p : cloud.parts) {
        for (const auto& q : p.points) {
            lo = lo.cwiseMin(q);
            hi = hi.cwiseMax(q);
        }
    }
    const double diagonal = (hi - lo).norm();
    const double offset = cloud.centroid().norm();
    if (offset > opts.centroid_tolerance * diagonal) {
        std::ostringstream msg;
        msg << "cloud centroid is " << offset << " m from the origin (limit " << opts.centroid_tolerance * diagonal
            << " m)";
        throw ValidationError(msg.str());
    }
}

// ---------------------------------------------------------------------------
// JSON cloud files

namespace detail {

inline Vec3 vec3_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 3) throw ParseError("expected [x, y, z]");
    Vec3 v;
    for (int i = 0; i < 3; ++i) {
        if (!j[i].is_number()) throw ParseError("coordinate is not a number");
        v[i] = j[i].get<double>();
    }
    return v;
}

inline nlohmann::ordered_json vec3_to_json(const Vec3& v) {
    return nlohmann::ordered_json::array({v.x(), v.y(), v.z()});
}

}  // namespace detail

inline nlohmann::ordered_json cloud_to_json(const ScatteringPointCloud& cloud) {
    nlohmann::ordered_json j;
    j["target_class"] = to_string(cloud.target_class);
    j["target_name"] = cloud.target_name;
    j["parts"] = nlohmann::ordered_json::array();
    for (const auto& p : cloud.parts) {
        nlohmann::ordered_json jp;
        jp["role"] = to_string(p.role);
        jp["points"] = nlohmann::ordered_json::array();
        for (const auto& q : p.points) jp["points"].push_back(detail::vec3_to_json(q));
        if (p.axis_a) jp["axis_a"] = detail::vec3_to_json(*p.axis_a);
        if (p.axis_b) jp["axis_b"] = detail::vec3_to_json(*p.axis_b);
        j["parts"].push_back(std::move(jp));
    }
    return j;
}

inline ScatteringPointCloud cloud_from_json(const nlohmann::json& j, const CloudValidation& opts = {}) {
    ScatteringPointCloud cloud;
    try {
        cloud.target_class = parse_target_class(j.at("target_class").get<std::string>());
        cloud.target_name = j.at("target_name").get<std::string>();
        const auto& parts = j.at("parts");
        if (!parts.is_array()) throw ParseError("\"parts\" must be an array");
        for (const auto& jp : parts) {
            Part p;
            p.role = parse_part_role(jp.at("role").get<std::string>());
            const auto& pts = jp.at("points");
            if (!pts.is_array()) throw ParseError("\"points\" must be an array");
            for (const auto& q : pts) p.points.push_back(detail::vec3_from_json(q));
            if (jp.contains("axis_a")) p.axis_a = detail::vec3_from_json(jp["axis_a"]);
            if (jp.contains("axis_b")) p.axis_b = detail::vec3_from_json(jp["axis_b"]);
            cloud.parts.push_back(std::move(p));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("cloud file: ") + e.what());
    }
    validate_cloud(cloud, opts);
    return cloud;
}

inline ScatteringPointCloud load_point_cloud(const std::string& path, const CloudValidation& opts = {}) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open cloud file: " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    return cloud_from_json(j, opts);
}

inline void save_point_cloud(const ScatteringPointCloud& cloud, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write cloud file: " + path);
    out << cloud_to_json(cloud).dump(1) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

// ---------------------------------------------------------------------------
// Procedural generators

namespace detail {

inline void recenter(ScatteringPointCloud& cloud, const Vec3& shift) {
    for (auto& p : cloud.parts) {
        for (auto& q : p.points) q -= shift;
        if (p.axis_a) *p.axis_a -= shift;
        if (p.axis_b) *p.axis_b -= shift;
    }
}

}  // namespace detail

/// Multirotor: X-configuration cross-arm body with one straight blade per rotor.
/// Blade axes are vertical through the hubs and alternate in sign so that
/// neighbouring rotors counter-rotate for the same (non-negative) frequency.
inline ScatteringPointCloud synthesize_uav_cloud(int rotor_count, double body_diagonal, double paddle_length,
                                                 int points_per_part, std::uint64_t seed,
                                                 std::string name = {}) {
    if (rotor_count != 4 && rotor_count != 6 && rotor_count != 8) {
        throw ConfigError("rotor_count must be 4, 6 or 8, got " + std::to_string(rotor_count));
    }
    if (!(body_diagonal > 0.0) || !(paddle_length > 0.0)) throw ConfigError("UAV dimensions must be positive");
    if (points_per_part < 1) throw ConfigError("points_per_part must be >= 1");

    rng::Xoshiro256 gen(rng::derive_seed(seed, "uav-cloud"));
    const double arm = body_diagonal / 2.0;
    const double hub_height = 0.05 * body_diagonal;
    const double frame_jitter = 0.01 * body_diagonal;
    const auto q = static_cast<std::size_t>(rotor_count);

    std::vector<Vec3> hubs(q);
    for (std::size_t k = 0; k < q; ++k) {
        const double ang = 2.0 * kPi * static_cast<double>(k) / rotor_count + kPi / rotor_count;
        hubs[k] = Vec3(arm * std::cos(ang), arm * std::sin(ang), 0.0);
    }

    ScatteringPointCloud cloud;
    cloud.target_class = TargetClass::UAV;
    cloud.target_name = name.empty() ? "Synthetic UAV-" + std::to_string(rotor_count) : std::move(name);

    Part body;
    body.role = PartRole::Body;
    for (int i = 0; i < points_per_part; ++i) {
        const Vec3& hub = hubs[static_cast<std::size_t>(i) % q];
        const double t = gen.uniform(0.05, 1.0);
        const double z = gen.uniform(-frame_jitter, frame_jitter);
        body.points.emplace_back(t * hub.x(), t * hub.y(), z);
    }
    cloud.parts.push_back(std::move(body));

    for (std::size_t k = 0; k < q; ++k) {
        Part blade;
        blade.role = PartRole::Rotor;
        const double heading = gen.uniform(0.0, kPi);
        const Vec3 along(std::cos(heading), std::sin(heading), 0.0);
        const Vec3 center = hubs[k] + Vec3(0.0, 0.0, hub_height);
        for (int i = 0; i < points_per_part; ++i) {
            const double s = gen.uniform(-paddle_length / 2.0, paddle_length / 2.0);
            blade.points.push_back(center + s * along);
        }
        const double sense = (k % 2 == 0) ? 1.0 : -1.0;
        blade.axis_b = center;
        blade.axis_a = center + Vec3(0.0, 0.0, sense * hub_height);
        cloud.parts.push_back(std::move(blade));
    }

    detail::recenter(cloud, cloud.centroid());
    validate_cloud(cloud);
    return cloud;
}

/// Bird: body along the x axis, two flat wings in the body plane whose hinge
/// axes run parallel to the body line and mirror each other across y = 0.
inline ScatteringPointCloud synthesize_bird_cloud(double body_length, double wing_span, int points_per_part,
                                                  std::uint64_t seed, std::string name = {}) {
    if (!(body_length > 0.0) || !(wing_span > 0.0)) throw ConfigError("bird dimensions must be positive");
    if (points_per_part < 1) throw ConfigError("points_per_part must be >= 1");

    rng::Xoshiro256 gen(rng::derive_seed(seed, "bird-cloud"));
    const double half_span = wing_span / 2.0;
    const double root = 0.05 * wing_span;
    const double chord = 0.3 * body_length;
    const double girth = 0.04 * body_length;

    ScatteringPointCloud cloud;
    cloud.target_class = TargetClass::Bird;
    cloud.target_name = name.empty() ? "Synthetic Bird" : std::move(name);

    // Body points come in y-mirrored pairs so the cloud stays symmetric about y = 0.
    Part body;
    body.role = PartRole::Body;
    for (int i = 0; i + 1 < points_per_part; i += 2) {
        const double x = gen.uniform(-body_length / 2.0, body_length / 2.0);
        const double y = gen.uniform(0.0, girth);
        const double z = gen.uniform(-girth, girth);
        body.points.emplace_back(x, y, z);
        body.points.emplace_back(x, -y, z);
    }
    if (points_per_part % 2 == 1) {
        body.points.emplace_back(gen.uniform(-body_length / 2.0, body_length / 2.0), 0.0, gen.uniform(-girth, girth));
    }
    cloud.parts.push_back(std::move(body));

    Part left;
    left.role = PartRole::Wing;
    for (int i = 0; i < points_per_part; ++i) {
        const double y = gen.uniform(root, half_span);
        // Chord tapers linearly towards the tip.
        const double local_chord = chord * (1.0 - 0.7 * (y - root) / (half_span - root));
        const double x = gen.uniform(-local_chord / 2.0, local_chord / 2.0);
        left.points.emplace_back(x, y, 0.0);
    }
    left.axis_a = Vec3(chord / 2.0, root, 0.0);
    left.axis_b = Vec3(-chord / 2.0, root, 0.0);

    const auto mirror = [](const Vec3& v) { return Vec3(v.x(), -v.y(), v.z()); };
    Part right;
    right.role = PartRole::Wing;
    for (const auto& p : left.points) right.points.push_back(mirror(p));
    right.axis_a = mirror(*left.axis_a);
    right.axis_b = mirror(*left.axis_b);

    cloud.parts.push_back(std::move(left));
    cloud.parts.push_back(std::move(right));

    const Vec3 c = cloud.centroid();
    detail::recenter(cloud, Vec3(c.x(), 0.0, c.z()));
    validate_cloud(cloud);
    return cloud;
}

}  // namespace airguard
