#pragma once

// Dataset generation: target specs, motion-model sampling, the SNR sweep, the
// manifest and stratified train/val/test splits.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "airguard/channel.hpp"
#include "airguard/config_json.hpp"
#include "airguard/features.hpp"
#include "airguard/image.hpp"
#include "airguard/kinematics.hpp"
#include "airguard/rng.hpp"
#include "airguard/targets.hpp"

namespace airguard {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] double sample(rng::Xoshiro256& gen) const {
        const double u = gen.uniform();
        return lo == hi ? lo : lo + (hi - lo) * u;
    }
    friend bool operator==(const Interval&, const Interval&) = default;
};

struct CloudSource {
    std::optional<std::string> file;  // resolved against the spec file's directory
    int rotor_count = 4;
    double paddle_length = 0.0;  // 0: 0.3 * size
    double wing_span = 0.0;      // 0: 2 * size
    int points_per_part = 25;
    std::optional<std::uint64_t> seed;  // default: derived from the target name
};

struct TargetSpec {
    std::string name;
    TargetClass target_class = TargetClass::UAV;
    double size = 0.3;  // UAV body diagonal or bird body length, meters
    CloudSource cloud;
    Interval part_frequency{100.0, 200.0};  // paddle or wing frequency, Hz
    Vec3 velocity_bound = Vec3::Zero();     // |v_x|, |v_y|, |v_z| bounds, m/s
    Interval range{40.0, 60.0};             // meters
    Interval azimuth_deg{30.0, 60.0};
    Interval elevation_deg{10.0, 30.0};
    Interval yaw_deg{-180.0, 180.0};
    Interval pitch_deg{0.0, 0.0};
    Interval roll_deg{0.0, 0.0};
    Interval jitter_std_deg{0.0, 0.0};  // per-symbol attitude increment, each angle
    Interval wing_min_deg{-40.0, -30.0};
    Interval wing_max_deg{30.0, 40.0};
    std::size_t samples_per_type = 10;
    std::string note;
};

namespace detail {

inline void check_interval(const Interval& iv, const std::string& what) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo > iv.hi) {
        throw ConfigError(what + ": empty or non-finite interval");
    }
}

inline bool is_safe_name(const std::string& name) {
    if (name.empty() || name == "." || name == "..") return false;
    for (char c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
                        c == '-' || c == '.';
        if (!ok) return false;
    }
    return true;
}

inline double deg(double d) { return d * kPi / 180.0; }

}  // namespace detail

inline void validate_spec(const TargetSpec& s) {
    if (!detail::is_safe_name(s.name)) {
        throw ConfigError("target name '" + s.name + "' must be nonempty and use only [A-Za-z0-9_.-]");
    }
    const std::string w = "target '" + s.name + "'";
    if (!(s.size > 0.0)) throw ConfigError(w + ": size must be > 0");
    detail::check_interval(s.part_frequency, w + " part_frequency_hz");
    if (s.part_frequency.lo < 0.0) throw ConfigError(w + ": part frequency must be >= 0");
    for (int i = 0; i < 3; ++i) {
        if (!(s.velocity_bound[i] >= 0.0) || !std::isfinite(s.velocity_bound[i])) {
            throw ConfigError(w + ": velocity bounds must be finite and >= 0");
        }
    }
    detail::check_interval(s.range, w + " range_m");
    if (!(s.range.lo > 0.0)) throw ConfigError(w + ": range must be > 0");
    detail::check_interval(s.azimuth_deg, w + " azimuth_deg");
    detail::check_interval(s.elevation_deg, w + " elevation_deg");
    detail::check_interval(s.yaw_deg, w + " yaw");
    detail::check_interval(s.pitch_deg, w + " pitch");
    detail::check_interval(s.roll_deg, w + " roll");
    detail::check_interval(s.jitter_std_deg, w + " jitter_std_deg");
    if (s.jitter_std_deg.lo < 0.0) throw ConfigError(w + ": jitter std must be >= 0");
    if (s.target_class == TargetClass::Bird) {
        detail::check_interval(s.wing_min_deg, w + " wing min");
        detail::check_interval(s.wing_max_deg, w + " wing max");
        if (!(s.wing_min_deg.hi < s.wing_max_deg.lo)) throw ConfigError(w + ": wing min range must lie below max range");
    }
    if (s.samples_per_type < 1) throw ConfigError(w + ": samples_per_type must be >= 1");
    if (s.cloud.points_per_part < 1) throw ConfigError(w + ": points_per_part must be >= 1");
}

namespace detail {

inline Interval interval_from_json(const nlohmann::json& j, const std::string& what) {
    if (j.is_number()) {
        const double v = j.get<double>();
        return {v, v};
    }
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    throw ConfigError(what + ": expected a number or [lo, hi]");
}

inline ojson interval_to_json(const Interval& iv) { return ojson::array({iv.lo, iv.hi}); }

}  // namespace detail

inline TargetSpec target_spec_from_json(const nlohmann::json& j) {
    detail::check_keys(j,
                       {"name", "class", "size_m", "cloud", "part_frequency_hz", "velocity_bound_mps", "position",
                        "attitude_deg", "jitter_std_deg", "wing_bounds_deg", "samples_per_type", "note"},
                       "target spec");
    TargetSpec s;
    try {
        s.name = j.at("name").get<std::string>();
        s.target_class = parse_target_class(j.at("class").get<std::string>());
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("target spec: 'name' and 'class' are required strings");
    } catch (const ParseError& e) {
        throw ConfigError(std::string("target spec: ") + e.what());
    }
    const std::string w = "target '" + s.name + "'";
    detail::read_into(j, "size_m", s.size, w);
    detail::read_into(j, "samples_per_type", s.samples_per_type, w);
    detail::read_into(j, "note", s.note, w);
    if (j.contains("cloud")) {
        const auto& c = j["cloud"];
        detail::check_keys(c, {"file", "generator"}, w + " cloud");
        if (c.contains("file") == c.contains("generator")) {
            throw ConfigError(w + ": cloud needs exactly one of 'file' or 'generator'");
        }
        if (c.contains("file")) {
            std::string f;
            detail::read_into(c, "file", f, w);
            s.cloud.file = f;
        } else {
            const auto& g = c["generator"];
            detail::check_keys(g, {"rotor_count", "paddle_length_m", "wing_span_m", "points_per_part", "seed"},
                               w + " generator");
            detail::read_into(g, "rotor_count", s.cloud.rotor_count, w);
            detail::read_into(g, "paddle_length_m", s.cloud.paddle_length, w);
            detail::read_into(g, "wing_span_m", s.cloud.wing_span, w);
            detail::read_into(g, "points_per_part", s.cloud.points_per_part, w);
            if (g.contains("seed")) {
                std::uint64_t seed = 0;
                detail::read_into(g, "seed", seed, w);
                s.cloud.seed = seed;
            }
        }
    }
    if (j.contains("part_frequency_hz")) s.part_frequency = detail::interval_from_json(j["part_frequency_hz"], w);
    if (j.contains("velocity_bound_mps")) {
        try {
            s.velocity_bound = detail::vec3_from_json(j["velocity_bound_mps"]);
        } catch (const ParseError&) {
            throw ConfigError(w + ": velocity_bound_mps must be [vx, vy, vz]");
        }
    }
    if (j.contains("position")) {
        const auto& p = j["position"];
        detail::check_keys(p, {"range_m", "azimuth_deg", "elevation_deg"}, w + " position");
        if (p.contains("range_m")) s.range = detail::interval_from_json(p["range_m"], w);
        if (p.contains("azimuth_deg")) s.azimuth_deg = detail::interval_from_json(p["azimuth_deg"], w);
        if (p.contains("elevation_deg")) s.elevation_deg = detail::interval_from_json(p["elevation_deg"], w);
    }
    if (j.contains("attitude_deg")) {
        const auto& a = j["attitude_deg"];
        detail::check_keys(a, {"yaw", "pitch", "roll"}, w + " attitude");
        if (a.contains("yaw")) s.yaw_deg = detail::interval_from_json(a["yaw"], w);
        if (a.contains("pitch")) s.pitch_deg = detail::interval_from_json(a["pitch"], w);
        if (a.contains("roll")) s.roll_deg = detail::interval_from_json(a["roll"], w);
    }
    if (j.contains("jitter_std_deg")) s.jitter_std_deg = detail::interval_from_json(j["jitter_std_deg"], w);
    if (j.contains("wing_bounds_deg")) {
        const auto& b = j["wing_bounds_deg"];
        detail::check_keys(b, {"min", "max"}, w + " wing_bounds_deg");
        if (b.contains("min")) s.wing_min_deg = detail::interval_from_json(b["min"], w);
        if (b.contains("max")) s.wing_max_deg = detail::interval_from_json(b["max"], w);
    }
    validate_spec(s);
    return s;
}

inline ojson target_spec_to_json(const TargetSpec& s) {
    ojson j;
    j["name"] = s.name;
    j["class"] = to_string(s.target_class);
    j["size_m"] = s.size;
    ojson cloud;
    if (s.cloud.file) {
        cloud["file"] = *s.cloud.file;
    } else {
        ojson g;
        if (s.target_class == TargetClass::UAV) {
            g["rotor_count"] = s.cloud.rotor_count;
            if (s.cloud.paddle_length > 0.0) g["paddle_length_m"] = s.cloud.paddle_length;
        } else if (s.cloud.wing_span > 0.0) {
            g["wing_span_m"] = s.cloud.wing_span;
        }
        g["points_per_part"] = s.cloud.points_per_part;
        if (s.cloud.seed) g["seed"] = *s.cloud.seed;
        cloud["generator"] = g;
    }
    j["cloud"] = cloud;
    j["part_frequency_hz"] = detail::interval_to_json(s.part_frequency);
    j["velocity_bound_mps"] = detail::vec3_to_json(s.velocity_bound);
    j["position"] = ojson{{"range_m", detail::interval_to_json(s.range)},
                          {"azimuth_deg", detail::interval_to_json(s.azimuth_deg)},
                          {"elevation_deg", detail::interval_to_json(s.elevation_deg)}};
    j["attitude_deg"] = ojson{{"yaw", detail::interval_to_json(s.yaw_deg)},
                              {"pitch", detail::interval_to_json(s.pitch_deg)},
                              {"roll", detail::interval_to_json(s.roll_deg)}};
    j["jitter_std_deg"] = detail::interval_to_json(s.jitter_std_deg);
    if (s.target_class == TargetClass::Bird) {
        j["wing_bounds_deg"] = ojson{{"min", detail::interval_to_json(s.wing_min_deg)},
                                     {"max", detail::interval_to_json(s.wing_max_deg)}};
    }
    j["samples_per_type"] = s.samples_per_type;
    if (!s.note.empty()) j["note"] = s.note;
    return j;
}

/// Reads a JSON array of target specs. Relative cloud files are resolved
/// against the spec file's directory.
inline std::vector<TargetSpec> load_target_specs(const std::string& path) {
    const auto j = detail::parse_json_file(path);
    if (!j.is_array()) throw ConfigError(path + ": expected a JSON array of target specs");
    const auto base = std::filesystem::path(path).parent_path();
    std::vector<TargetSpec> specs;
    for (const auto& item : j) {
        auto s = target_spec_from_json(item);
        if (s.cloud.file && std::filesystem::path(*s.cloud.file).is_relative()) {
            s.cloud.file = (base / *s.cloud.file).string();
        }
        specs.push_back(std::move(s));
    }
    std::map<std::string, int> seen;
    for (const auto& s : specs) {
        if (seen[s.name]++ > 0) throw ConfigError("duplicate target name '" + s.name + "'");
    }
    return specs;
}

/// The calibration cloud of a target type: loaded from file or generated.
inline ScatteringPointCloud resolve_cloud(const TargetSpec& spec) {
    validate_spec(spec);
    ScatteringPointCloud cloud;
    if (spec.cloud.file) {
        cloud = load_point_cloud(*spec.cloud.file);
        if (cloud.target_class != spec.target_class) {
            throw ConfigError("target '" + spec.name + "': cloud file class does not match the spec");
        }
        cloud.target_name = spec.name;
        return cloud;
    }
    const std::uint64_t seed = spec.cloud.seed.value_or(rng::derive_seed(0, "cloud", spec.name));
    if (spec.target_class == TargetClass::UAV) {
        const double paddle = spec.cloud.paddle_length > 0.0 ? spec.cloud.paddle_length : 0.3 * spec.size;
        return synthesize_uav_cloud(spec.cloud.rotor_count, spec.size, paddle, spec.cloud.points_per_part, seed,
                                    spec.name);
    }
    const double span = spec.cloud.wing_span > 0.0 ? spec.cloud.wing_span : 2.0 * spec.size;
    return synthesize_bird_cloud(spec.size, span, spec.cloud.points_per_part, seed, spec.name);
}

/// Uniform draws inside every interval of the spec, in a fixed order.
inline TargetMotionModel sample_motion_model(const TargetSpec& spec, std::size_t moving_parts, std::uint64_t seed) {
    validate_spec(spec);
    if (spec.target_class == TargetClass::Bird && moving_parts != 2) throw ConfigError("a bird has two wings");
    rng::Xoshiro256 gen(rng::derive_seed(seed, "motion-model"));
    TargetMotionModel m;
    SphericalPoint p;
    p.r = spec.range.sample(gen);
    p.theta = detail::deg(spec.azimuth_deg.sample(gen));
    p.phi = detail::deg(spec.elevation_deg.sample(gen));
    m.initial_position = sph_to_cart(p);
    for (int i = 0; i < 3; ++i) {
        const double b = spec.velocity_bound[i];
        m.velocity[i] = Interval{-b, b}.sample(gen);
    }
    m.initial_attitude.yaw = detail::deg(spec.yaw_deg.sample(gen));
    m.initial_attitude.pitch = detail::deg(spec.pitch_deg.sample(gen));
    m.initial_attitude.roll = detail::deg(spec.roll_deg.sample(gen));
    for (auto& row : m.jitter) {
        const double sd = detail::deg(spec.jitter_std_deg.sample(gen));
        row = JitterRow{0.0, sd * sd};
    }
    const double f = spec.part_frequency.sample(gen);
    m.part_frequency.assign(moving_parts, f);
    if (spec.target_class == TargetClass::UAV) {
        m.part_initial_phase.resize(moving_parts);
        for (auto& phase : m.part_initial_phase) phase = Interval{0.0, 2.0 * kPi}.sample(gen);
    } else {
        WingBounds wb;
        wb.min = detail::deg(spec.wing_min_deg.sample(gen));
        wb.max = detail::deg(spec.wing_max_deg.sample(gen));
        m.wing_bounds = wb;
        m.part_initial_phase.assign(2, Interval{wb.min, wb.max}.sample(gen));
        m.initial_wing_direction = gen.uniform() < 0.5 ? 1 : -1;
    }
    return m;
}

inline TargetMotionModel sample_motion_model(const TargetSpec& spec, std::uint64_t seed) {
    return sample_motion_model(spec, resolve_cloud(spec).moving_part_count(), seed);
}

// ---------------------------------------------------------------------------
// Manifest

enum class Split { Train, Val, Test, Unassigned };

inline std::string to_string(Split s) {
    switch (s) {
        case Split::Train: return "train";
        case Split::Val: return "val";
        case Split::Test: return "test";
        case Split::Unassigned: break;
    }
    return "unassigned";
}

inline Split parse_split(const std::string& s) {
    if (s == "train") return Split::Train;
    if (s == "val") return Split::Val;
    if (s == "test") return Split::Test;
    if (s == "unassigned") return Split::Unassigned;
    throw ParseError("unknown split '" + s + "'");
}

struct ManifestRecord {
    std::string sample_id;
    std::string target_name;
    TargetClass class_label = TargetClass::UAV;
    std::size_t model_index = 0;
    std::uint64_t motion_seed = 0;
    std::uint64_t noise_seed = 0;
    double snr_db = 0.0;
    std::size_t repeat_index = 0;
    std::string image_path;  // relative to the dataset directory
    Split split = Split::Unassigned;

    friend bool operator==(const ManifestRecord&, const ManifestRecord&) = default;
};

struct SkipRecord {
    std::string target_name;
    std::size_t model_index = 0;
    std::uint64_t motion_seed = 0;
    std::string error;
};

struct DatasetManifest {
    std::vector<ManifestRecord> records;
    std::vector<SkipRecord> skips;

    [[nodiscard]] std::size_t count(Split s) const {
        std::size_t n = 0;
        for (const auto& r : records) n += r.split == s ? 1 : 0;
        return n;
    }
};

inline ojson record_to_json(const ManifestRecord& r) {
    ojson j;
    j["sample_id"] = r.sample_id;
    j["target_name"] = r.target_name;
    j["class_label"] = to_string(r.class_label);
    j["model_index"] = r.model_index;
    j["motion_seed"] = r.motion_seed;
    j["noise_seed"] = r.noise_seed;
    j["snr_db"] = r.snr_db;
    j["repeat_index"] = r.repeat_index;
    j["image_path"] = r.image_path;
    j["split"] = to_string(r.split);
    return j;
}

inline ManifestRecord record_from_json(const nlohmann::json& j) {
    ManifestRecord r;
    try {
        r.sample_id = j.at("sample_id").get<std::string>();
        r.target_name = j.at("target_name").get<std::string>();
        r.class_label = parse_target_class(j.at("class_label").get<std::string>());
        r.model_index = j.value("model_index", std::size_t{0});
        r.motion_seed = j.at("motion_seed").get<std::uint64_t>();
        r.noise_seed = j.at("noise_seed").get<std::uint64_t>();
        r.snr_db = j.at("snr_db").get<double>();
        r.repeat_index = j.at("repeat_index").get<std::size_t>();
        r.image_path = j.at("image_path").get<std::string>();
        r.split = parse_split(j.at("split").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("manifest record: ") + e.what());
    }
    return r;
}

inline void write_manifest(const std::string& path, const std::vector<ManifestRecord>& records) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) throw IoError("cannot write manifest " + path);
    for (const auto& r : records) out << record_to_json(r).dump() << '\n';
    if (!out) throw IoError("write failed: " + path);
}

inline std::vector<ManifestRecord> read_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open manifest " + path);
    std::vector<ManifestRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            records.push_back(record_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(path + ": " + e.what());
        }
    }
    return records;
}

inline void write_skips(const std::string& path, const std::vector<SkipRecord>& skips) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    for (const auto& s : skips) {
        ojson j;
        j["target_name"] = s.target_name;
        j["model_index"] = s.model_index;
        j["motion_seed"] = s.motion_seed;
        j["error"] = s.error;
        out << j.dump() << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

// ---------------------------------------------------------------------------
// Splits

struct SplitFractions {
    double train = 0.8;
    double val = 0.1;
    double test = 0.1;
};

/// Largest-remainder apportionment of n items; ties go to the earlier split.
inline std::array<std::size_t, 3> apportion(std::size_t n, const SplitFractions& f) {
    const std::array<double, 3> frac{f.train, f.val, f.test};
    std::array<std::size_t, 3> counts{};
    std::array<double, 3> rem{};
    std::size_t assigned = 0;
    for (std::size_t k = 0; k < 3; ++k) {
        const double quota = frac[k] * static_cast<double>(n);
        // Absorb rounding noise such as 0.8 * 20 = 15.999999999999998.
        const double fl = std::floor(quota + 1e-9);
        counts[k] = static_cast<std::size_t>(fl);
        rem[k] = std::max(0.0, quota - fl);
        assigned += counts[k];
    }
    while (assigned < n) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < 3; ++k) {
            if (rem[k] > rem[best]) best = k;
        }
        ++counts[best];
        rem[best] = -1.0;
        ++assigned;
    }
    return counts;
}

/// Stratified by (target_name, snr_db); each stratum is shuffled with a seed
/// derived from the stratum key, then apportioned train/val/test.
inline DatasetManifest split_dataset(const DatasetManifest& manifest, const SplitFractions& f, std::uint64_t seed) {
    for (double v : {f.train, f.val, f.test}) {
        if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("split fractions must lie in [0, 1]");
    }
    if (std::abs(f.train + f.val + f.test - 1.0) > 1e-9) throw ConfigError("split fractions must sum to 1");

    std::map<std::pair<std::string, std::int64_t>, std::vector<std::size_t>> strata;
    for (std::size_t i = 0; i < manifest.records.size(); ++i) {
        const auto& r = manifest.records[i];
        strata[{r.target_name, std::llround(r.snr_db * 1000.0)}].push_back(i);
    }
    DatasetManifest out = manifest;
    for (auto& [key, members] : strata) {
        rng::Xoshiro256 gen(rng::derive_seed(seed, "split", key.first, key.second));
        for (std::size_t i = members.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(gen.below(i));
            std::swap(members[i - 1], members[j]);
        }
        const auto counts = apportion(members.size(), f);
        std::size_t pos = 0;
        const std::array<Split, 3> order{Split::Train, Split::Val, Split::Test};
        for (std::size_t k = 0; k < 3; ++k) {
            for (std::size_t c = 0; c < counts[k]; ++c) out.records[members[pos++]].split = order[k];
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Generation

struct DatasetOptions {
    SystemConfig system{};
    FeatureConfig features{};
    FadingModel fading = FadingModel::RandomGlobalPhase;
    std::vector<double> snr_db{0.0, 10.0, 20.0};
    std::size_t repeats = 2;
    SplitFractions split{};
    bool auto_beam = true;  // point both beams at the initial target position
    std::size_t jobs = 1;
    bool dry_run = false;  // manifest only
    std::function<void(const std::string&)> progress;
};

inline std::string format_snr(double snr_db) {
    std::ostringstream os;
    os << snr_db;
    return os.str();
}

inline std::string make_sample_id(const std::string& target, std::size_t model, double snr_db, std::size_t repeat) {
    std::string idx = std::to_string(model);
    if (idx.size() < 4) idx.insert(0, 4 - idx.size(), '0');
    return target + "_m" + idx + "_snr" + format_snr(snr_db) + "_r" + std::to_string(repeat);
}

inline std::uint64_t motion_seed_for(std::uint64_t master, const std::string& target, std::size_t model) {
    return rng::derive_seed(master, "motion", target, model);
}

inline std::uint64_t noise_seed_for(std::uint64_t master, const std::string& target, std::size_t model, double snr_db,
                                    std::size_t repeat) {
    return rng::derive_seed(master, "noise", target, model, std::llround(snr_db * 1000.0), repeat);
}

struct SampleFeatures {
    CmdSpectrum cmd;
    HrrpSpectrum hrrp;
    RgbImage aggregated;
};

inline SampleFeatures extract_features(const EchoMatrix& echo, const FeatureConfig& cfg) {
    SampleFeatures f;
    f.cmd = cmd_spectrum(echo, cfg);
    f.hrrp = hrrp_spectrum(echo, cfg);
    f.aggregated = aggregate_images(render_feature_image(f.cmd.matrix, cfg, FeatureKind::Cmd),
                                    render_feature_image(f.hrrp.matrix, cfg, FeatureKind::Hrrp));
    return f;
}

/// Noiseless echo of one motion model, beams aimed at its initial position if
/// `auto_beam`.
inline EchoMatrix synthesize_model_echo(const ScatteringPointCloud& cloud, const TargetMotionModel& motion,
                                        SystemConfig cfg, FadingModel fading, bool auto_beam,
                                        std::uint64_t motion_seed) {
    if (auto_beam) {
        cfg.tx_beam = spatial_direction(motion.initial_position);
        cfg.rx_beam = cfg.tx_beam;
    }
    TrajectoryGenerator gen(cloud, motion, cfg.symbol_interval, rng::derive_seed(motion_seed, "trajectory"));
    const auto alpha = make_fading(cloud.point_count(), fading, motion_seed);
    return synthesize_echo(gen, alpha, cfg, fading);
}

inline ojson dataset_options_to_json(const DatasetOptions& o, std::uint64_t master_seed) {
    ojson j;
    j["master_seed"] = master_seed;
    j["system"] = system_config_to_json(o.system);
    j["features"] = feature_config_to_json(o.features);
    j["fading"] = to_string(o.fading);
    j["snr_db"] = o.snr_db;
    j["repeats"] = o.repeats;
    j["split"] = ojson{{"train", o.split.train}, {"val", o.split.val}, {"test", o.split.test}};
    j["auto_beam"] = o.auto_beam;
    return j;
}

/// Writes <out_dir>/<target>/<sample_id>.png per record, plus manifest.jsonl,
/// skips.jsonl and run.json. Output does not depend on `jobs`.
inline DatasetManifest generate_dataset(const std::vector<TargetSpec>& specs, const DatasetOptions& opts,
                                        const std::string& out_dir, std::uint64_t master_seed) {
    if (specs.empty()) throw ConfigError("no target specs given");
    if (opts.snr_db.empty()) throw ConfigError("SNR list is empty");
    if (opts.repeats < 1) throw ConfigError("repeats must be >= 1");
    for (double s : opts.snr_db) {
        if (!std::isfinite(s)) throw ConfigError("SNR values must be finite");
    }
    opts.system.validate();
    opts.features.validate();
    if (opts.system.symbols != opts.features.group_size * opts.features.groups) {
        throw ConfigError("N must equal G * N0");
    }
    (void)parse_colormap(opts.features.colormap);
    {
        std::map<std::string, int> seen;
        for (const auto& s : specs) {
            validate_spec(s);
            if (seen[s.name]++ > 0) throw ConfigError("duplicate target name '" + s.name + "'");
        }
    }

    namespace fs = std::filesystem;
    const fs::path root(out_dir);
    std::error_code ec;
    fs::create_directories(root, ec);
    if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());

    std::vector<ScatteringPointCloud> clouds;
    clouds.reserve(specs.size());
    for (const auto& s : specs) {
        clouds.push_back(resolve_cloud(s));
        if (!opts.dry_run) {
            fs::create_directories(root / s.name, ec);
            if (ec) throw IoError("cannot create " + (root / s.name).string() + ": " + ec.message());
        }
    }

    struct Job {
        std::size_t spec;
        std::size_t model;
    };
    std::vector<Job> jobs;
    for (std::size_t s = 0; s < specs.size(); ++s) {
        for (std::size_t k = 0; k < specs[s].samples_per_type; ++k) jobs.push_back({s, k});
    }
    struct JobResult {
        std::vector<ManifestRecord> records;
        std::optional<SkipRecord> skip;
        std::exception_ptr fatal;
    };
    std::vector<JobResult> results(jobs.size());
    std::mutex progress_mutex;
    std::size_t done = 0;

    const auto run_job = [&](std::size_t index) {
        const auto& job = jobs[index];
        const auto& spec = specs[job.spec];
        const auto& cloud = clouds[job.spec];
        JobResult& res = results[index];
        const std::uint64_t motion_seed = motion_seed_for(master_seed, spec.name, job.model);
        try {
            std::vector<ManifestRecord> records;
            std::optional<EchoMatrix> clean;
            if (!opts.dry_run) {
                const auto motion = sample_motion_model(spec, cloud.moving_part_count(), motion_seed);
                clean = synthesize_model_echo(cloud, motion, opts.system, opts.fading, opts.auto_beam, motion_seed);
            }
            for (double snr : opts.snr_db) {
                for (std::size_t rep = 0; rep < opts.repeats; ++rep) {
                    ManifestRecord r;
                    r.sample_id = make_sample_id(spec.name, job.model, snr, rep);
                    r.target_name = spec.name;
                    r.class_label = spec.target_class;
                    r.model_index = job.model;
                    r.motion_seed = motion_seed;
                    r.noise_seed = noise_seed_for(master_seed, spec.name, job.model, snr, rep);
                    r.snr_db = snr;
                    r.repeat_index = rep;
                    r.image_path = spec.name + "/" + r.sample_id + ".png";
                    if (clean) {
                        const auto noisy = add_noise(*clean, snr, r.noise_seed);
                        r.snr_db = *noisy.snr_db;
                        const auto features = extract_features(noisy, opts.features);
                        write_png((root / r.image_path).string(), features.aggregated);
                    }
                    records.push_back(std::move(r));
                }
            }
            res.records = std::move(records);
        } catch (const IoError&) {
            res.fatal = std::current_exception();
        } catch (const Error& e) {
            res.skip = SkipRecord{spec.name, job.model, motion_seed, e.what()};
        } catch (...) {
            res.fatal = std::current_exception();
        }
        if (opts.progress) {
            std::lock_guard lock(progress_mutex);
            ++done;
            opts.progress("model " + std::to_string(done) + "/" + std::to_string(jobs.size()) + " (" + spec.name +
                          " #" + std::to_string(job.model) + ")");
        }
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min(opts.jobs, jobs.size()));
    if (workers == 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i) run_job(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < jobs.size(); i = next++) run_job(i);
            });
        }
        for (auto& t : pool) t.join();
    }

    DatasetManifest manifest;
    for (auto& res : results) {
        if (res.fatal) std::rethrow_exception(res.fatal);
        if (res.skip) manifest.skips.push_back(*res.skip);
        for (auto& r : res.records) manifest.records.push_back(std::move(r));
    }
    manifest = split_dataset(manifest, opts.split, rng::derive_seed(master_seed, "split"));

    write_manifest((root / "manifest.jsonl").string(), manifest.records);
    write_skips((root / "skips.jsonl").string(), manifest.skips);
    auto run = dataset_options_to_json(opts, master_seed);
    run["targets"] = ojson::array();
    for (const auto& s : specs) run["targets"].push_back(target_spec_to_json(s));
    detail::write_json_file((root / "run.json").string(), run);
    return manifest;
}

}  // namespace airguard
