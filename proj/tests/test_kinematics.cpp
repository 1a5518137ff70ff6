#include <catch_amalgamated.hpp>

#include <Eigen/Geometry>
#include <cmath>
#include <filesystem>

#include "airguard/kinematics.hpp"
#include "airguard/rng.hpp"
#include "airguard/targets.hpp"
#include "test_support.hpp"

using namespace airguard;

TEST_CASE("Rodrigues rotation agrees with the axis-angle matrix") {
    rng::Xoshiro256 gen(17);
    for (int trial = 0; trial < 500; ++trial) {
        const Vec3 p(gen.uniform(-2, 2), gen.uniform(-2, 2), gen.uniform(-2, 2));
        const Vec3 a(gen.uniform(-1, 1), gen.uniform(-1, 1), gen.uniform(-1, 1));
        Vec3 e(gen.gaussian(), gen.gaussian(), gen.gaussian());
        e.normalize();
        const double angle = gen.uniform(-10, 10);
        const Vec3 oracle = a + Eigen::AngleAxisd(angle, e).toRotationMatrix() * (p - a);
        const Vec3 got = rodrigues_rotate(p, a, e, angle);
        REQUIRE((got - oracle).norm() <= 1e-12);
    }
}

TEST_CASE("Rodrigues rotation of a fixed point about a skew axis") {
    // Frozen from a matrix-exponential evaluation.
    const Vec3 expected(1.900650385430473, 1.4128933648568762, 2.6864562497126512);
    const Vec3 got = rodrigues_rotate(Vec3(1, 2, 3), Vec3(0, 1, 0), Vec3(1, 1, 1).normalized(), 0.7);
    CHECK((got - expected).norm() <= 1e-12);
}

TEST_CASE("Rodrigues rotation preserves the distance to the axis line") {
    const Vec3 a(0.1, -0.2, 0.3);
    const Vec3 e = Vec3(1, 2, 2) / 3.0;
    const Vec3 p(0.5, 0.4, -0.7);
    const auto dist = [&](const Vec3& q) { return (q - a - e * e.dot(q - a)).norm(); };
    for (double angle : {0.1, 1.0, kPi, -2.5}) {
        CHECK(std::abs(dist(rodrigues_rotate(p, a, e, angle)) - dist(p)) < 1e-12);
    }
    CHECK_THROWS_AS(rodrigues_rotate(p, a, Vec3(1, 1, 0), 0.3), NumericError);
}

TEST_CASE("rotor phase increment") {
    CHECK(uav_phase_step(0, 100.0, 0.3, 1e-5) == 0.3);
    CHECK(uav_phase_step(1, 100.0, 0.3, 1e-5) == Catch::Approx(2.0 * kPi * 100.0 * 1e-5).epsilon(1e-15));
    CHECK(uav_phase_step(5000, 100.0, 0.3, 1e-5) == uav_phase_step(1, 100.0, 0.3, 1e-5));
}

TEST_CASE("wing oscillator follows the six-case table") {
    const WingBounds b{-0.5, 0.5};
    const double f = 4.0;
    const double ts = 1e-4;
    const double step = 2.0 * b.span() * f * ts;

    // Rising and strictly inside: keep rising.
    auto s = wing_phase_step({step, 0.0}, b, f, ts);
    CHECK(s.beta == Catch::Approx(step));
    CHECK(s.delta == Catch::Approx(step));
    // Rising past the top: reverse.
    s = wing_phase_step({step, 0.5}, b, f, ts);
    CHECK(s.beta > b.max);
    CHECK(s.delta == Catch::Approx(-step));
    // Falling inside: keep falling.
    s = wing_phase_step({-step, 0.1}, b, f, ts);
    CHECK(s.delta == Catch::Approx(-step));
    // Falling past the bottom: reverse.
    s = wing_phase_step({-step, -0.5}, b, f, ts);
    CHECK(s.delta == Catch::Approx(step));
    // Landing exactly on a bound counts as inside.
    s = wing_phase_step({0.25, 0.25}, b, f, ts);
    CHECK(s.beta == 0.5);
    CHECK(s.delta > 0.0);

    CHECK_THROWS_AS(wing_phase_step({0, 0}, WingBounds{0.3, 0.3}, f, ts), ConfigError);
}

TEST_CASE("wing oscillator is a bounded triangle wave at the flapping frequency") {
    const WingBounds b{-kPi / 6.0, kPi / 3.0};
    const double f = 4.0;
    const double ts = 1e-4;
    const double step = 2.0 * b.span() * f * ts;
    WingPhaseState s{step, 0.0};
    const double mid = 0.5 * (b.min + b.max);
    std::vector<double> up_crossings;
    double prev = s.beta;
    for (int n = 1; n <= 10000; ++n) {
        s = wing_phase_step(s, b, f, ts);
        REQUIRE(s.beta >= b.min - step);
        REQUIRE(s.beta <= b.max + step);
        if (prev < mid && s.beta >= mid) up_crossings.push_back(n * ts);
        prev = s.beta;
    }
    REQUIRE(up_crossings.size() >= 3);
    const double measured =
        static_cast<double>(up_crossings.size() - 1) / (up_crossings.back() - up_crossings.front());
    CHECK(std::abs(measured - f) <= 0.02 * f);
}

TEST_CASE("attitude matrix is a proper rotation and composes yaw-pitch-roll") {
    const Mat3 r = attitude_matrix(0.3, -0.2, 0.9);
    CHECK((r * r.transpose() - Mat3::Identity()).norm() < 1e-14);
    CHECK(std::abs(r.determinant() - 1.0) < 1e-14);
    const Mat3 oracle = (Eigen::AngleAxisd(0.3, Vec3::UnitZ()) * Eigen::AngleAxisd(-0.2, Vec3::UnitY()) *
                         Eigen::AngleAxisd(0.9, Vec3::UnitX()))
                            .toRotationMatrix();
    CHECK((r - oracle).norm() < 1e-14);
}

TEST_CASE("attitude walk applies one increment per symbol including the first") {
    JitterMatrix j{};
    j[0] = {0.01, 0.0};
    const auto walk = attitude_walk({0.5, 0.0, 0.0}, j, 4, 1);
    REQUIRE(walk.size() == 4);
    for (std::size_t n = 0; n < 4; ++n) CHECK(walk[n].yaw == Catch::Approx(0.5 + 0.01 * static_cast<double>(n + 1)));

    JitterMatrix noisy{};
    noisy[1] = {0.0, 1e-4};
    CHECK(attitude_walk({}, noisy, 50, 3) == attitude_walk({}, noisy, 50, 3));
    CHECK(attitude_walk({}, noisy, 50, 3) != attitude_walk({}, noisy, 50, 4));
}

TEST_CASE("attitude increments have the configured variance") {
    JitterMatrix j{};
    j[0] = {0.0, 1e-8};
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        AttitudeWalker walker({}, j, seed);
        double prev = 0.0;
        double sum = 0.0;
        double sum2 = 0.0;
        const int n = 100000;
        for (int k = 0; k < n; ++k) {
            const double yaw = walker.next().yaw;
            const double inc = yaw - prev;
            prev = yaw;
            sum += inc;
            sum2 += inc * inc;
        }
        const double mean = sum / n;
        const double var = (sum2 - n * mean * mean) / (n - 1);
        REQUIRE(std::abs(var / 1e-8 - 1.0) <= 0.2);
    }
}

TEST_CASE("spherical conversion") {
    const Vec3 p(3.0, 4.0, 12.0);
    const auto s = cart_to_sph(p);
    CHECK(s.r == Catch::Approx(13.0));
    CHECK(s.theta == Catch::Approx(std::atan2(4.0, 3.0)));
    CHECK(s.phi == Catch::Approx(std::asin(12.0 / 13.0)));
    CHECK((sph_to_cart(s) - p).norm() < 1e-12);
    // Azimuth is folded into [0, pi].
    CHECK(cart_to_sph(Vec3(3.0, -4.0, 0.0)).theta == Catch::Approx(std::atan2(4.0, 3.0)));
    CHECK(cart_to_sph(Vec3(0.0, 0.0, 2.0)).theta == 0.0);
    CHECK_THROWS_AS(cart_to_sph(Vec3::Zero()), DomainError);
}

TEST_CASE("rigid parts keep their internal distances over 10^4 symbols") {
    const auto cloud = synthesize_uav_cloud(4, 0.38, 0.12, 10, 7);
    TargetMotionModel m = test::quad_motion(cloud);
    m.jitter[0] = {0.0, 1e-6};
    m.jitter[1] = {0.0, 1e-6};
    m.jitter[2] = {0.0, 1e-6};
    TrajectoryGenerator gen(cloud, m, 1e-5, 11);
    const auto initial = cloud.flattened_points();
    double worst = 0.0;
    for (int n = 0; n < 10000; ++n) {
        gen.next();
        const auto world = gen.world_points();
        std::size_t offset = 0;
        for (const auto& part : cloud.parts) {
            const std::size_t k = part.points.size();
            for (std::size_t i = offset; i < offset + k; ++i) {
                for (std::size_t j = i + 1; j < offset + k; ++j) {
                    worst = std::max(worst, std::abs((world[i] - world[j]).norm() - (initial[i] - initial[j]).norm()));
                }
            }
            offset += k;
        }
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("a rotor returns to its start after one revolution") {
    const auto cloud = synthesize_uav_cloud(4, 0.38, 0.12, 10, 7);
    TargetMotionModel m = test::quad_motion(cloud);
    m.velocity = Vec3::Zero();
    std::fill(m.part_initial_phase.begin(), m.part_initial_phase.end(), 0.0);
    std::fill(m.part_frequency.begin(), m.part_frequency.end(), 100.0);
    TrajectoryGenerator gen(cloud, m, 1e-5, 1);
    gen.next();
    const std::vector<Vec3> start(gen.body_frame_points().begin(), gen.body_frame_points().end());
    for (int n = 0; n < 1000; ++n) gen.next();
    const auto now = gen.body_frame_points();
    for (std::size_t i = 0; i < start.size(); ++i) CHECK((now[i] - start[i]).norm() < 1e-9);
}

TEST_CASE("a paddle point circles its translated axis at the rotor rate") {
    ScatteringPointCloud cloud;
    cloud.target_class = TargetClass::UAV;
    cloud.parts.push_back(Part{PartRole::Body, {Vec3(0, 0, 0)}, std::nullopt, std::nullopt});
    cloud.parts.push_back(Part{PartRole::Rotor, {Vec3(0.1, 0, 0)}, Vec3(0, 0, 0.02), Vec3(0, 0, 0)});
    TargetMotionModel m = test::still_motion(Vec3(30.0, 10.0, 5.0), Vec3(-4.0, 2.0, 0.0));
    m.part_frequency = {50.0};
    m.part_initial_phase = {0.0};
    const double ts = 1e-4;
    TrajectoryGenerator gen(cloud, m, ts, 1);
    double prev_az = 0.0;
    for (int n = 0; n < 200; ++n) {
        gen.next();
        const auto w = gen.world_points();
        const Vec3 rel = w[1] - w[0];
        CHECK(std::hypot(rel.x(), rel.y()) == Catch::Approx(0.1).epsilon(1e-9));
        CHECK(std::abs(rel.z()) < 1e-9);
        const double az = std::atan2(rel.y(), rel.x());
        if (n > 0) {
            const double step = std::remainder(az - prev_az, 2.0 * kPi);
            CHECK(std::abs(step) == Catch::Approx(2.0 * kPi * 50.0 * ts).epsilon(1e-9));
        }
        prev_az = az;
    }
}

TEST_CASE("translation follows p0 + n Ts v for the body") {
    const auto cloud = synthesize_uav_cloud(4, 0.38, 0.12, 5, 2);
    TargetMotionModel m = test::quad_motion(cloud);
    TrajectoryGenerator gen(cloud, m, 1e-5, 3);
    const auto body = cloud.parts[0].points;
    for (int n = 0; n < 300; ++n) {
        const auto snap = gen.next();
        CHECK(snap.symbol_index == static_cast<std::size_t>(n));
        const Vec3 expected = body[0] + m.initial_position + n * 1e-5 * m.velocity;
        CHECK((gen.world_points()[0] - expected).norm() < 1e-12);
        CHECK((sph_to_cart(snap.points[0]) - expected).norm() < 1e-9);
    }
}

TEST_CASE("wing phase stays within one step of its bounds for 100 random seeds") {
    const auto bird = synthesize_bird_cloud(0.3, 0.6, 6, 5);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        rng::Xoshiro256 gen(seed);
        TargetMotionModel m = test::bird_motion();
        const double lo = gen.uniform(-1.0, -0.1);
        const double hi = gen.uniform(0.1, 1.0);
        m.wing_bounds = WingBounds{lo, hi};
        const double f = gen.uniform(2.0, 12.0);
        m.part_frequency.assign(2, f);
        m.part_initial_phase.assign(2, gen.uniform(lo, hi));
        m.initial_wing_direction = gen.uniform() < 0.5 ? 1 : -1;
        const double ts = 1e-4;
        const double step = 2.0 * (hi - lo) * f * ts;
        TrajectoryGenerator traj(bird, m, ts, seed);
        for (int n = 0; n < 3000; ++n) {
            traj.next();
            REQUIRE(traj.wing_phase() >= lo - step - 1e-12);
            REQUIRE(traj.wing_phase() <= hi + step + 1e-12);
        }
    }
}

TEST_CASE("both wings move symmetrically") {
    const auto bird = synthesize_bird_cloud(0.3, 0.6, 6, 5);
    TargetMotionModel m = test::bird_motion();
    TrajectoryGenerator traj(bird, m, 1e-4, 0);
    for (int n = 0; n < 500; ++n) traj.next();
    const auto pts = traj.body_frame_points();
    const std::size_t body = bird.parts[0].points.size();
    const std::size_t wing = bird.parts[1].points.size();
    for (std::size_t i = 0; i < wing; ++i) {
        const Vec3& a = pts[body + i];
        const Vec3& b = pts[body + wing + i];
        CHECK(std::abs(a.x() - b.x()) < 1e-9);
        CHECK(std::abs(a.y() + b.y()) < 1e-9);
        CHECK(std::abs(a.z() - b.z()) < 1e-9);
    }
}

TEST_CASE("trajectories are deterministic given the seed") {
    const auto cloud = synthesize_uav_cloud(4, 0.38, 0.12, 5, 7);
    TargetMotionModel m = test::quad_motion(cloud);
    m.jitter[0] = {0.0, 1e-4};
    const auto a = simulate_trajectory(cloud, m, 200, 1e-5, 9);
    CHECK(a == simulate_trajectory(cloud, m, 200, 1e-5, 9));
    CHECK(a != simulate_trajectory(cloud, m, 200, 1e-5, 10));
}

TEST_CASE("motion validation") {
    const auto cloud = synthesize_uav_cloud(4, 0.38, 0.12, 5, 7);
    TargetMotionModel m = test::quad_motion(cloud);
    m.part_frequency.pop_back();
    CHECK_THROWS_AS(validate_motion(m, cloud), ConfigError);
    m = test::quad_motion(cloud);
    m.part_frequency[0] = -1.0;
    CHECK_THROWS_AS(validate_motion(m, cloud), ConfigError);
    m = test::quad_motion(cloud);
    m.jitter[2].variance = -1.0;
    CHECK_THROWS_AS(validate_motion(m, cloud), ConfigError);

    const auto bird = synthesize_bird_cloud(0.3, 0.6, 6, 5);
    TargetMotionModel b = test::bird_motion();
    b.wing_bounds.reset();
    CHECK_THROWS_AS(validate_motion(b, bird), ConfigError);
    b = test::bird_motion();
    b.initial_wing_direction = 0;
    CHECK_THROWS_AS(validate_motion(b, bird), ConfigError);
    b = test::bird_motion();
    b.part_frequency[1] += 1.0;
    CHECK_THROWS_AS(validate_motion(b, bird), ConfigError);
}

TEST_CASE("trajectory file round-trip") {
    const auto cloud = synthesize_uav_cloud(4, 0.38, 0.12, 5, 7);
    const auto snaps = simulate_trajectory(cloud, test::quad_motion(cloud), 20, 1e-5, 1);
    const auto path = (std::filesystem::temp_directory_path() / "ag_traj.agtr").string();
    write_trajectory(path, snaps);
    CHECK(read_trajectory(path) == snaps);
    CHECK(std::filesystem::file_size(path) == 4 + 2 + 4 + 4 + 20 * cloud.point_count() * 24);
}
