#pragma once

// Per-symbol motion of a multi-part target: part rotation (rotor spin or wing
// flapping) in the body frame, attitude random walk, constant-velocity
// translation, then conversion to spherical coordinates seen from the array.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "airguard/binary_io.hpp"
#include "airguard/common.hpp"
#include "airguard/rng.hpp"
#include "airguard/targets.hpp"

namespace airguard {

struct Attitude {
    double yaw = 0.0;
    double pitch = 0.0;
    double roll = 0.0;
    friend bool operator==(const Attitude&, const Attitude&) = default;
};

/// Per-symbol Gaussian increment of one attitude angle.
struct JitterRow {
    double mean = 0.0;      // rad
    double variance = 0.0;  // rad^2
    friend bool operator==(const JitterRow&, const JitterRow&) = default;
};

using JitterMatrix = std::array<JitterRow, 3>;  // yaw, pitch, roll

struct WingBounds {
    double min = 0.0;
    double max = 0.0;
    [[nodiscard]] double span() const noexcept { return max - min; }
    friend bool operator==(const WingBounds&, const WingBounds&) = default;
};

struct TargetMotionModel {
    Vec3 initial_position = Vec3::Zero();
    Vec3 velocity = Vec3::Zero();
    Attitude initial_attitude;
    JitterMatrix jitter{};
    std::vector<double> part_initial_phase;  // one per moving part
    std::vector<double> part_frequency;      // Hz, one per moving part
    std::optional<WingBounds> wing_bounds;   // birds only
    int initial_wing_direction = 1;          // birds only, +1 or -1

    friend bool operator==(const TargetMotionModel&, const TargetMotionModel&) = default;
};

struct SphericalPoint {
    double r = 0.0;
    double theta = 0.0;
    double phi = 0.0;
    friend bool operator==(const SphericalPoint&, const SphericalPoint&) = default;
};

struct TrajectorySnapshot {
    std::size_t symbol_index = 0;
    std::vector<SphericalPoint> points;
    friend bool operator==(const TrajectorySnapshot&, const TrajectorySnapshot&) = default;
};

// ---------------------------------------------------------------------------
// Elementary operations

/// Rotates p by `angle` about the line through axis_point with unit direction axis_dir.
inline Vec3 rodrigues_rotate(const Vec3& p, const Vec3& axis_point, const Vec3& axis_dir, double angle) {
    if (std::abs(axis_dir.norm() - 1.0) > 1e-9) throw NumericError("rotation axis direction is not unit length");
    if (angle == 0.0) return p;
    const Vec3 u = p - axis_point;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return axis_point + u * c + axis_dir.cross(u) * s + axis_dir * (axis_dir.dot(u) * (1.0 - c));
}

/// Rotor phase increment at symbol n: the initial phase at n = 0, then a constant 2*pi*F*Ts.
inline double uav_phase_step(std::size_t n, double frequency_hz, double initial_phase, double symbol_interval) {
    return n == 0 ? initial_phase : 2.0 * kPi * frequency_hz * symbol_interval;
}

struct WingPhaseState {
    double delta = 0.0;  // increment applied at the previous symbol
    double beta = 0.0;   // wing phase before that increment
};

/// One step of the bounded triangle-wave flapping oscillator.
///
/// The new phase is beta_prev + delta_prev. The new increment keeps the sign of
/// delta_prev while the phase lies inside [min, max] (boundary values count as
/// inside), turns negative above max and positive below min. Its magnitude is
/// 2 * (max - min) * F * Ts, which gives one full swing per 1/F seconds.
inline WingPhaseState wing_phase_step(const WingPhaseState& prev, const WingBounds& bounds, double frequency_hz,
                                      double symbol_interval) {
    if (!(bounds.min < bounds.max)) throw ConfigError("wing bounds must satisfy min < max");
    const double step = 2.0 * bounds.span() * frequency_hz * symbol_interval;
    WingPhaseState next;
    next.beta = prev.beta + prev.delta;
    const bool rising = prev.delta >= 0.0;
    bool up = rising;
    if (next.beta > bounds.max) {
        up = false;
    } else if (next.beta < bounds.min) {
        up = true;
    }
    next.delta = up ? step : -step;
    return next;
}

/// R_Y(yaw) * R_P(pitch) * R_R(roll).
inline Mat3 attitude_matrix(double yaw, double pitch, double roll) {
    const double cy = std::cos(yaw), sy = std::sin(yaw);
    const double cp = std::cos(pitch), sp = std::sin(pitch);
    const double cr = std::cos(roll), sr = std::sin(roll);
    Mat3 ry;
    ry << cy, -sy, 0.0,
          sy, cy, 0.0,
          0.0, 0.0, 1.0;
    Mat3 rp;
    rp << cp, 0.0, sp,
          0.0, 1.0, 0.0,
          -sp, 0.0, cp;
    Mat3 rr;
    rr << 1.0, 0.0, 0.0,
          0.0, cr, -sr,
          0.0, sr, cr;
    return ry * rp * rr;
}

inline Mat3 attitude_matrix(const Attitude& a) { return attitude_matrix(a.yaw, a.pitch, a.roll); }

/// Incremental attitude random walk: attitude_n = initial + sum_{j<=n} increment_j.
class AttitudeWalker {
public:
    AttitudeWalker(const Attitude& initial, const JitterMatrix& jitter, std::uint64_t seed)
        : current_(initial), jitter_(jitter), gen_(rng::derive_seed(seed, "attitude")) {
        for (const auto& row : jitter_) {
            if (row.variance < 0.0) throw ConfigError("attitude jitter variance must be >= 0");
        }
    }

    Attitude next() {
        current_.yaw += gen_.gaussian(jitter_[0].mean, jitter_[0].variance);
        current_.pitch += gen_.gaussian(jitter_[1].mean, jitter_[1].variance);
        current_.roll += gen_.gaussian(jitter_[2].mean, jitter_[2].variance);
        return current_;
    }

private:
    Attitude current_;
    JitterMatrix jitter_;
    rng::Xoshiro256 gen_;
};

inline std::vector<Attitude> attitude_walk(const Attitude& initial, const JitterMatrix& jitter,
                                           std::size_t n_symbols, std::uint64_t seed) {
    AttitudeWalker walker(initial, jitter, seed);
    std::vector<Attitude> out;
    out.reserve(n_symbols);
    for (std::size_t n = 0; n < n_symbols; ++n) out.push_back(walker.next());
    return out;
}

/// theta = |atan2(y, x)| in [0, pi] (and 0 on the z axis), phi = asin(z / r).
inline SphericalPoint cart_to_sph(const Vec3& p) {
    const double r = p.norm();
    if (!(r > 0.0)) throw DomainError("spherical conversion of the origin is undefined");
    SphericalPoint s;
    s.r = r;
    s.phi = std::asin(std::clamp(p.z() / r, -1.0, 1.0));
    s.theta = (p.x() == 0.0 && p.y() == 0.0) ? 0.0 : std::abs(std::atan2(p.y(), p.x()));
    return s;
}

inline Vec3 sph_to_cart(const SphericalPoint& s) {
    const double cphi = std::cos(s.phi);
    return {s.r * cphi * std::cos(s.theta), s.r * cphi * std::sin(s.theta), s.r * std::sin(s.phi)};
}

// ---------------------------------------------------------------------------
// Trajectory simulation

inline void validate_motion(const TargetMotionModel& motion, const ScatteringPointCloud& cloud) {
    const std::size_t q = cloud.moving_part_count();
    if (motion.part_frequency.size() != q || motion.part_initial_phase.size() != q) {
        throw ConfigError("motion model has " + std::to_string(motion.part_frequency.size()) +
                          " part frequencies / " + std::to_string(motion.part_initial_phase.size()) +
                          " initial phases for " + std::to_string(q) + " moving parts");
    }
    for (double f : motion.part_frequency) {
        if (!(f >= 0.0)) throw ConfigError("part frequencies must be >= 0");
    }
    for (const auto& row : motion.jitter) {
        if (!(row.variance >= 0.0)) throw ConfigError("attitude jitter variance must be >= 0");
    }
    if (cloud.target_class == TargetClass::Bird) {
        if (!motion.wing_bounds) throw ConfigError("bird motion requires wing bounds");
        if (!(motion.wing_bounds->min < motion.wing_bounds->max)) throw ConfigError("wing bounds must satisfy min < max");
        if (motion.initial_wing_direction != 1 && motion.initial_wing_direction != -1) {
            throw ConfigError("initial_wing_direction must be +1 or -1");
        }
        if (motion.part_frequency[0] != motion.part_frequency[1] ||
            motion.part_initial_phase[0] != motion.part_initial_phase[1]) {
            throw ConfigError("both wings must share flapping frequency and initial phase");
        }
    }
}

/// Streams one TrajectorySnapshot per OFDM symbol.
///
/// Per symbol: (i) rotate each moving part about its body-frame axis, (ii) apply
/// the attitude of the random walk at this symbol, (iii) translate to
/// p0 + n*Ts*v, (iv) convert to spherical coordinates. Part rotation always
/// acts on the body-frame cloud, so the axes stay fixed in the body frame and
/// follow the target through the attitude and translation stages.
class TrajectoryGenerator {
public:
    TrajectoryGenerator(const ScatteringPointCloud& cloud, const TargetMotionModel& motion, double symbol_interval,
                        std::uint64_t seed)
        : motion_(motion),
          is_bird_(cloud.target_class == TargetClass::Bird),
          ts_(symbol_interval),
          walker_(motion.initial_attitude, motion.jitter, seed) {
        validate_cloud(cloud, CloudValidation{std::numeric_limits<double>::infinity()});
        validate_motion(motion, cloud);
        if (!(symbol_interval > 0.0)) throw ConfigError("symbol interval must be > 0");
        body_points_ = cloud.flattened_points();
        std::size_t offset = 0;
        for (const auto& part : cloud.parts) {
            if (part.is_moving()) {
                axes_.push_back(Axis{*part.axis_a, part.axis_direction(), offset, offset + part.points.size()});
            }
            offset += part.points.size();
        }
        world_.resize(body_points_.size());
    }

    [[nodiscard]] std::size_t point_count() const noexcept { return body_points_.size(); }
    [[nodiscard]] std::size_t symbols_emitted() const noexcept { return n_; }

    TrajectorySnapshot next() {
        const std::size_t n = n_;
        rotate_parts(n);
        attitude_ = walker_.next();
        const Mat3 rot = attitude_matrix(attitude_);
        const Vec3 position = motion_.initial_position + static_cast<double>(n) * ts_ * motion_.velocity;

        TrajectorySnapshot snap;
        snap.symbol_index = n;
        snap.points.reserve(body_points_.size());
        for (std::size_t l = 0; l < body_points_.size(); ++l) {
            world_[l] = rot * body_points_[l] + position;
            snap.points.push_back(cart_to_sph(world_[l]));
        }
        ++n_;
        return snap;
    }

    /// Body-frame positions after the latest part rotation.
    [[nodiscard]] std::span<const Vec3> body_frame_points() const noexcept { return body_points_; }
    /// Cartesian array-frame positions of the latest snapshot.
    [[nodiscard]] std::span<const Vec3> world_points() const noexcept { return world_; }
    [[nodiscard]] const Attitude& attitude() const noexcept { return attitude_; }
    /// Accumulated wing-1 phase after the latest symbol (birds only).
    [[nodiscard]] double wing_phase() const noexcept { return wing_.beta + wing_.delta; }

private:
    struct Axis {
        Vec3 point;
        Vec3 dir;
        std::size_t begin;
        std::size_t end;
    };

    void rotate_parts(std::size_t n) {
        if (is_bird_) {
            const double f = motion_.part_frequency[0];
            double angle = 0.0;
            if (n == 0) {
                angle = motion_.part_initial_phase[0];
                const double step = 2.0 * motion_.wing_bounds->span() * f * ts_;
                // Seed the previous increment so the first real step continues in
                // the configured direction from the initial phase.
                const double seeded = motion_.initial_wing_direction * step;
                wing_ = WingPhaseState{seeded, angle - seeded};
            } else {
                wing_ = wing_phase_step(wing_, *motion_.wing_bounds, f, ts_);
                angle = wing_.delta;
            }
            // The second wing mirrors the first and therefore turns the opposite way.
            rotate_range(axes_[0], angle);
            rotate_range(axes_[1], -angle);
            return;
        }
        for (std::size_t i = 0; i < axes_.size(); ++i) {
            rotate_range(axes_[i], uav_phase_step(n, motion_.part_frequency[i], motion_.part_initial_phase[i], ts_));
        }
    }

    void rotate_range(const Axis& axis, double angle) {
        if (angle == 0.0) return;
        for (std::size_t l = axis.begin; l < axis.end; ++l) {
            body_points_[l] = rodrigues_rotate(body_points_[l], axis.point, axis.dir, angle);
        }
    }

    TargetMotionModel motion_;
    bool is_bird_;
    double ts_;
    AttitudeWalker walker_;
    std::vector<Vec3> body_points_;
    std::vector<Vec3> world_;
    std::vector<Axis> axes_;
    WingPhaseState wing_{};
    Attitude attitude_{};
    std::size_t n_ = 0;
};

inline std::vector<TrajectorySnapshot> simulate_trajectory(const ScatteringPointCloud& cloud,
                                                           const TargetMotionModel& motion, std::size_t n_symbols,
                                                           double symbol_interval, std::uint64_t seed) {
    TrajectoryGenerator gen(cloud, motion, symbol_interval, seed);
    std::vector<TrajectorySnapshot> out;
    out.reserve(n_symbols);
    for (std::size_t n = 0; n < n_symbols; ++n) out.push_back(gen.next());
    return out;
}

// ---------------------------------------------------------------------------
// AGTR trajectory dump: "AGTR", u16 version, u32 N, u32 L, then N*L (r, theta, phi) f64 triples.

inline constexpr std::uint16_t kTrajectoryFormatVersion = 1;

inline void write_trajectory(const std::string& path, std::span<const TrajectorySnapshot> snapshots) {
    const std::size_t l = snapshots.empty() ? 0 : snapshots.front().points.size();
    io::ByteWriter w;
    w.put_magic("AGTR");
    w.put_uint<std::uint16_t>(kTrajectoryFormatVersion);
    w.put_uint<std::uint32_t>(static_cast<std::uint32_t>(snapshots.size()));
    w.put_uint<std::uint32_t>(static_cast<std::uint32_t>(l));
    for (const auto& snap : snapshots) {
        if (snap.points.size() != l) throw DimensionError("snapshots have differing point counts");
        for (const auto& p : snap.points) {
            w.put_f64(p.r);
            w.put_f64(p.theta);
            w.put_f64(p.phi);
        }
    }
    w.write_file(path);
}

inline std::vector<TrajectorySnapshot> read_trajectory(const std::string& path) {
    auto r = io::ByteReader::from_file(path);
    r.expect_magic("AGTR");
    const auto version = r.get_uint<std::uint16_t>();
    if (version != kTrajectoryFormatVersion) throw ParseError("unsupported AGTR version " + std::to_string(version));
    const auto n = r.get_uint<std::uint32_t>();
    const auto l = r.get_uint<std::uint32_t>();
    if (r.remaining() != static_cast<std::size_t>(n) * l * 24) throw ParseError("AGTR payload size mismatch");
    std::vector<TrajectorySnapshot> out(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        out[i].symbol_index = i;
        out[i].points.resize(l);
        for (auto& p : out[i].points) {
            p.r = r.get_f64();
            p.theta = r.get_f64();
            p.phi = r.get_f64();
        }
    }
    return out;
}

}  // namespace airguard
