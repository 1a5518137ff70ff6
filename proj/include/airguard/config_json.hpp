#pragma once

// JSON (de)serialization of SystemConfig, FeatureConfig and TargetMotionModel.
// Missing keys keep their defaults; unknown keys are rejected. SI units and
// radians throughout.

#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>

#include <json.hpp>

#include "airguard/channel.hpp"
#include "airguard/features.hpp"
#include "airguard/kinematics.hpp"

namespace airguard {

using ojson = nlohmann::ordered_json;

namespace detail {

inline void check_keys(const nlohmann::json& j, std::initializer_list<std::string_view> allowed, std::string_view what) {
    if (!j.is_object()) throw ConfigError(std::string(what) + ": expected a JSON object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (auto k : allowed) known = known || item.key() == k;
        if (!known) throw ConfigError(std::string(what) + ": unknown key '" + item.key() + "'");
    }
}

template <typename T>
void read_into(const nlohmann::json& j, const char* key, T& out, std::string_view what) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string(what) + ": bad value for '" + key + "'");
    }
}

inline nlohmann::json parse_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

inline void write_json_file(const std::string& path, const ojson& j) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

inline ojson array_dims_to_json(const ArrayDims& a) { return ojson{{"nx", a.nx}, {"nz", a.nz}}; }

inline ArrayDims array_dims_from_json(const nlohmann::json& j, ArrayDims a) {
    check_keys(j, {"nx", "nz"}, "array");
    read_into(j, "nx", a.nx, "array");
    read_into(j, "nz", a.nz, "array");
    return a;
}

inline ojson beam_to_json(const BeamDirection& b) { return ojson{{"psi", b.psi}, {"omega", b.omega}}; }

inline BeamDirection beam_from_json(const nlohmann::json& j, BeamDirection b) {
    check_keys(j, {"psi", "omega"}, "beam");
    read_into(j, "psi", b.psi, "beam");
    read_into(j, "omega", b.omega, "beam");
    return b;
}

inline ojson scaling_to_json(const Scaling& s) {
    return ojson{{"mode", s.log_db ? "log-db" : "linear"}, {"floor_db", s.floor_db}};
}

inline Scaling scaling_from_json(const nlohmann::json& j, Scaling s) {
    check_keys(j, {"mode", "floor_db"}, "scaling");
    std::string mode = s.log_db ? "log-db" : "linear";
    read_into(j, "mode", mode, "scaling");
    if (mode != "linear" && mode != "log-db") throw ConfigError("scaling: mode must be 'linear' or 'log-db'");
    s.log_db = mode == "log-db";
    read_into(j, "floor_db", s.floor_db, "scaling");
    return s;
}

}  // namespace detail

inline std::string to_string(PilotScheme p) { return p == PilotScheme::UnitConstant ? "unit" : "random-qpsk"; }

inline PilotScheme parse_pilot_scheme(const std::string& s) {
    if (s == "unit") return PilotScheme::UnitConstant;
    if (s == "random-qpsk") return PilotScheme::RandomUnitModulus;
    throw ConfigError("unknown pilot scheme '" + s + "'");
}

inline ojson system_config_to_json(const SystemConfig& c) {
    ojson j;
    j["f0"] = c.f0;
    j["delta_f"] = c.delta_f;
    j["subcarriers"] = c.subcarriers;
    j["symbol_interval"] = c.symbol_interval;
    j["symbols"] = c.symbols;
    j["tx_array"] = detail::array_dims_to_json(c.tx_array);
    j["rx_array"] = detail::array_dims_to_json(c.rx_array);
    if (c.element_spacing_m) j["element_spacing_m"] = *c.element_spacing_m;
    j["transmit_power"] = c.transmit_power;
    j["sensing_fraction"] = c.sensing_fraction;
    j["tx_beam"] = detail::beam_to_json(c.tx_beam);
    j["rx_beam"] = detail::beam_to_json(c.rx_beam);
    j["pilot_scheme"] = to_string(c.pilot_scheme);
    j["pilot_seed"] = c.pilot_seed;
    j["store_raw"] = c.store_raw;
    return j;
}

inline SystemConfig system_config_from_json(const nlohmann::json& j, SystemConfig c = {}) {
    constexpr std::string_view what = "system config";
    detail::check_keys(j,
                       {"f0", "delta_f", "subcarriers", "symbol_interval", "symbols", "tx_array", "rx_array",
                        "element_spacing_m", "transmit_power", "sensing_fraction", "tx_beam", "rx_beam",
                        "pilot_scheme", "pilot_seed", "store_raw"},
                       what);
    detail::read_into(j, "f0", c.f0, what);
    detail::read_into(j, "delta_f", c.delta_f, what);
    detail::read_into(j, "subcarriers", c.subcarriers, what);
    detail::read_into(j, "symbol_interval", c.symbol_interval, what);
    detail::read_into(j, "symbols", c.symbols, what);
    if (j.contains("tx_array")) c.tx_array = detail::array_dims_from_json(j["tx_array"], c.tx_array);
    if (j.contains("rx_array")) c.rx_array = detail::array_dims_from_json(j["rx_array"], c.rx_array);
    if (j.contains("element_spacing_m")) {
        double d = 0.0;
        detail::read_into(j, "element_spacing_m", d, what);
        c.element_spacing_m = d;
    }
    detail::read_into(j, "transmit_power", c.transmit_power, what);
    detail::read_into(j, "sensing_fraction", c.sensing_fraction, what);
    if (j.contains("tx_beam")) c.tx_beam = detail::beam_from_json(j["tx_beam"], c.tx_beam);
    if (j.contains("rx_beam")) c.rx_beam = detail::beam_from_json(j["rx_beam"], c.rx_beam);
    if (j.contains("pilot_scheme")) {
        std::string s;
        detail::read_into(j, "pilot_scheme", s, what);
        c.pilot_scheme = parse_pilot_scheme(s);
    }
    detail::read_into(j, "pilot_seed", c.pilot_seed, what);
    detail::read_into(j, "store_raw", c.store_raw, what);
    c.validate();
    return c;
}

inline ojson feature_config_to_json(const FeatureConfig& c) {
    ojson j;
    j["group_size"] = c.group_size;
    j["groups"] = c.groups;
    j["hrrp_r_min"] = c.hrrp_r_min;
    j["hrrp_r_max"] = c.hrrp_r_max;
    j["hrrp_resolution"] = c.hrrp_resolution;
    j["image_width"] = c.image_width;
    j["image_height"] = c.image_height;
    j["colormap"] = c.colormap;
    j["cmd_scaling"] = detail::scaling_to_json(c.cmd_scaling);
    j["hrrp_scaling"] = detail::scaling_to_json(c.hrrp_scaling);
    j["hrrp_matching"] = to_string(c.hrrp_matching);
    return j;
}

inline FeatureConfig feature_config_from_json(const nlohmann::json& j, FeatureConfig c = {}) {
    constexpr std::string_view what = "feature config";
    detail::check_keys(j,
                       {"group_size", "groups", "hrrp_r_min", "hrrp_r_max", "hrrp_resolution", "image_width",
                        "image_height", "colormap", "cmd_scaling", "hrrp_scaling", "hrrp_matching"},
                       what);
    detail::read_into(j, "group_size", c.group_size, what);
    detail::read_into(j, "groups", c.groups, what);
    detail::read_into(j, "hrrp_r_min", c.hrrp_r_min, what);
    detail::read_into(j, "hrrp_r_max", c.hrrp_r_max, what);
    detail::read_into(j, "hrrp_resolution", c.hrrp_resolution, what);
    detail::read_into(j, "image_width", c.image_width, what);
    detail::read_into(j, "image_height", c.image_height, what);
    detail::read_into(j, "colormap", c.colormap, what);
    if (j.contains("cmd_scaling")) c.cmd_scaling = detail::scaling_from_json(j["cmd_scaling"], c.cmd_scaling);
    if (j.contains("hrrp_scaling")) c.hrrp_scaling = detail::scaling_from_json(j["hrrp_scaling"], c.hrrp_scaling);
    if (j.contains("hrrp_matching")) {
        std::string s;
        detail::read_into(j, "hrrp_matching", s, what);
        c.hrrp_matching = parse_hrrp_matching(s);
    }
    c.validate();
    return c;
}

inline ojson motion_to_json(const TargetMotionModel& m) {
    ojson j;
    j["initial_position"] = detail::vec3_to_json(m.initial_position);
    j["velocity"] = detail::vec3_to_json(m.velocity);
    j["initial_attitude"] = ojson{{"yaw", m.initial_attitude.yaw},
                                  {"pitch", m.initial_attitude.pitch},
                                  {"roll", m.initial_attitude.roll}};
    ojson jitter = ojson::array();
    for (const auto& row : m.jitter) jitter.push_back(ojson{{"mean", row.mean}, {"variance", row.variance}});
    j["jitter"] = jitter;
    j["part_initial_phase"] = m.part_initial_phase;
    j["part_frequency"] = m.part_frequency;
    if (m.wing_bounds) {
        j["wing_bounds"] = ojson{{"min", m.wing_bounds->min}, {"max", m.wing_bounds->max}};
        j["initial_wing_direction"] = m.initial_wing_direction;
    }
    return j;
}

inline TargetMotionModel motion_from_json(const nlohmann::json& j) {
    constexpr std::string_view what = "motion model";
    detail::check_keys(j,
                       {"initial_position", "velocity", "initial_attitude", "jitter", "part_initial_phase",
                        "part_frequency", "wing_bounds", "initial_wing_direction"},
                       what);
    TargetMotionModel m;
    try {
        if (j.contains("initial_position")) m.initial_position = detail::vec3_from_json(j["initial_position"]);
        if (j.contains("velocity")) m.velocity = detail::vec3_from_json(j["velocity"]);
    } catch (const ParseError& e) {
        throw ConfigError(std::string("motion model: ") + e.what());
    }
    if (j.contains("initial_attitude")) {
        const auto& a = j["initial_attitude"];
        detail::check_keys(a, {"yaw", "pitch", "roll"}, "initial_attitude");
        detail::read_into(a, "yaw", m.initial_attitude.yaw, what);
        detail::read_into(a, "pitch", m.initial_attitude.pitch, what);
        detail::read_into(a, "roll", m.initial_attitude.roll, what);
    }
    if (j.contains("jitter")) {
        const auto& rows = j["jitter"];
        if (!rows.is_array() || rows.size() != 3) throw ConfigError("motion model: jitter must list yaw, pitch, roll");
        for (std::size_t i = 0; i < 3; ++i) {
            detail::check_keys(rows[i], {"mean", "variance"}, "jitter");
            detail::read_into(rows[i], "mean", m.jitter[i].mean, what);
            detail::read_into(rows[i], "variance", m.jitter[i].variance, what);
        }
    }
    detail::read_into(j, "part_initial_phase", m.part_initial_phase, what);
    detail::read_into(j, "part_frequency", m.part_frequency, what);
    if (j.contains("wing_bounds")) {
        const auto& b = j["wing_bounds"];
        detail::check_keys(b, {"min", "max"}, "wing_bounds");
        WingBounds wb;
        detail::read_into(b, "min", wb.min, what);
        detail::read_into(b, "max", wb.max, what);
        m.wing_bounds = wb;
    }
    detail::read_into(j, "initial_wing_direction", m.initial_wing_direction, what);
    return m;
}

inline TargetMotionModel load_motion_model(const std::string& path) {
    return motion_from_json(detail::parse_json_file(path));
}

}  // namespace airguard
