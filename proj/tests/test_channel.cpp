#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>

#include "airguard/channel.hpp"
#include "airguard/targets.hpp"
#include "test_support.hpp"

using namespace airguard;

namespace {

// Direct evaluation: full steering vectors and one exponential per subcarrier.
cplx brute_force_entry(const SystemConfig& cfg, const TrajectorySnapshot& snap, std::span<const cplx> fading,
                       std::size_t m) {
    const double d = cfg.spacing();
    const auto w = steering_vector(cfg.rx_beam.psi, cfg.rx_beam.omega, cfg.rx_array.nx, cfg.rx_array.nz, cfg.f0, d);
    const auto xh = steering_vector(cfg.tx_beam.psi, cfg.tx_beam.omega, cfg.tx_array.nx, cfg.tx_array.nz, cfg.f0, d);
    const double nr = static_cast<double>(cfg.rx_array.count());
    const double nh = static_cast<double>(cfg.tx_array.count());
    cplx y(0.0, 0.0);
    for (std::size_t l = 0; l < snap.points.size(); ++l) {
        const auto& p = snap.points[l];
        const double psi = std::cos(p.phi) * std::cos(p.theta);
        const double omega = std::sin(p.phi);
        const auto ar = steering_vector(psi, omega, cfg.rx_array.nx, cfg.rx_array.nz, cfg.f0, d);
        const auto ah = steering_vector(psi, omega, cfg.tx_array.nx, cfg.tx_array.nz, cfg.f0, d);
        cplx rx(0.0, 0.0);
        for (std::size_t i = 0; i < ar.size(); ++i) rx += std::conj(w[i] / std::sqrt(nr)) * ar[i];
        cplx tx(0.0, 0.0);
        const double amp = std::sqrt(cfg.sensing_fraction * cfg.transmit_power / nh);
        for (std::size_t i = 0; i < ah.size(); ++i) tx += ah[i] * std::conj(amp * xh[i]);
        const double phase = -4.0 * kPi * cfg.subcarrier_frequency(m) * p.r / kSpeedOfLight;
        y += fading[l] * rx * tx * std::polar(1.0, phase);
    }
    return y;
}

}  // namespace

TEST_CASE("echo synthesis matches the brute-force channel sum") {
    const auto cloud = synthesize_uav_cloud(4, 0.38, 0.12, 6, 7);
    const auto motion = test::quad_motion(cloud);
    SystemConfig cfg = test::aimed_system(motion.initial_position, 6, 64);
    cfg.tx_array = {4, 3};
    cfg.rx_array = {2, 5};
    cfg.transmit_power = 2.0;
    cfg.sensing_fraction = 0.5;
    const auto traj = simulate_trajectory(cloud, motion, cfg.symbols, cfg.symbol_interval, 4);
    const auto fading = make_fading(cloud.point_count(), FadingModel::RandomGlobalPhase, 9);
    const auto echo = synthesize_echo(traj, fading, cfg);
    double peak = 0.0;
    for (const auto& v : echo.data) peak = std::max(peak, std::abs(v));
    REQUIRE(peak > 0.0);
    for (std::size_t n = 0; n < cfg.symbols; ++n) {
        for (std::size_t m = 0; m < cfg.subcarriers; ++m) {
            const cplx ref = brute_force_entry(cfg, traj[n], fading, m);
            REQUIRE(std::abs(echo(n, m) - ref) <= 1e-10 * peak);
        }
    }
}

TEST_CASE("steering vector phases, x index slow and z index fast") {
    const double f0 = 26e9;
    const double d = kSpeedOfLight / f0 / 2.0;
    for (const auto& v : steering_vector(0.0, 0.0, 3, 4, f0, d)) CHECK(std::abs(v - cplx(1.0, 0.0)) < 1e-15);
    const auto endfire = steering_vector(1.0, 0.0, 2, 1, f0, d);
    CHECK(std::abs(endfire[1] - cplx(-1.0, 0.0)) < 1e-12);
    const auto a = steering_vector(0.5, 0.25, 2, 2, f0, d);
    const double expected[] = {0.0, kPi / 4.0, kPi / 2.0, 3.0 * kPi / 4.0};
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(std::abs(a[k]) == Catch::Approx(1.0).epsilon(1e-15));
        CHECK(std::abs(a[k] - std::polar(1.0, expected[k])) < 1e-12);
    }
    CHECK_THROWS_AS(steering_vector(0.0, 0.0, 0, 2, f0, d), ConfigError);
}

TEST_CASE("a scatterer on a transmit null leaves no echo") {
    SystemConfig cfg;
    cfg.symbols = 4;
    cfg.subcarriers = 32;
    // Psi - Psi_t = 2 / N_x puts the point on the first null of the 8-element x factor.
    const double theta = std::acos(0.25);
    TrajectorySnapshot snap;
    snap.points = {SphericalPoint{50.0, theta, 0.0}};
    const auto echo = synthesize_echo(std::vector<TrajectorySnapshot>(4, snap), std::vector<cplx>{cplx(1, 0)}, cfg);
    double worst = 0.0;
    for (const auto& v : echo.data) worst = std::max(worst, std::abs(v));
    CHECK(worst < 1e-12);
}

TEST_CASE("echo synthesis is linear in the scatterers") {
    SystemConfig cfg = test::aimed_system(Vec3(40.0, 25.0, 12.0), 3, 64);
    const SphericalPoint a = cart_to_sph(Vec3(40.0, 25.0, 12.0));
    const SphericalPoint b = cart_to_sph(Vec3(40.3, 24.8, 12.1));
    auto snaps = [](std::vector<SphericalPoint> pts) {
        std::vector<TrajectorySnapshot> out(3);
        for (auto& s : out) s.points = pts;
        return out;
    };
    const std::vector<cplx> one{cplx(1, 0)};
    const auto ea = synthesize_echo(snaps({a}), one, cfg);
    const auto eb = synthesize_echo(snaps({b}), one, cfg);
    const auto both = synthesize_echo(snaps({a, b}), std::vector<cplx>(2, cplx(1, 0)), cfg);
    for (std::size_t k = 0; k < both.data.size(); ++k) CHECK(std::abs(both.data[k] - ea.data[k] - eb.data[k]) < 1e-12);
}

TEST_CASE("single antenna, single scatterer: unit-modulus range phase ramp") {
    SystemConfig cfg;
    cfg.tx_array = {1, 1};
    cfg.rx_array = {1, 1};
    cfg.transmit_power = 4.0;
    cfg.sensing_fraction = 0.25;
    cfg.symbols = 1;
    cfg.subcarriers = 16;
    const double r = 50.0;
    TrajectorySnapshot snap;
    snap.points = {SphericalPoint{r, 0.4, 0.1}};
    const std::vector<cplx> fading{cplx(1.0, 0.0)};
    const auto echo = synthesize_echo(std::vector<TrajectorySnapshot>{snap}, fading, cfg);
    for (std::size_t m = 0; m < cfg.subcarriers; ++m) {
        const cplx expected = std::polar(1.0, -4.0 * kPi * cfg.subcarrier_frequency(m) * r / kSpeedOfLight);
        CHECK(std::abs(echo(0, m) - expected) < 1e-10);
    }
    CHECK(measure_signal_power(echo) == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("beam gain peaks on the aimed direction") {
    SystemConfig cfg;
    const Vec3 p(40.0, 25.0, 12.0);
    cfg.tx_beam = spatial_direction(p);
    cfg.rx_beam = cfg.tx_beam;
    const auto d = spatial_direction(p);
    const cplx on = rx_beam_response(cfg, d.psi, d.omega) * tx_beam_response(cfg, d.psi, d.omega);
    // |w^H a| = sqrt(N_R), |a^T x*| = sqrt(N_H) for unit power.
    CHECK(std::abs(on) == Catch::Approx(64.0).epsilon(1e-12));
    const cplx off = rx_beam_response(cfg, d.psi + 0.3, d.omega) * tx_beam_response(cfg, d.psi + 0.3, d.omega);
    CHECK(std::abs(off) < std::abs(on));
}

TEST_CASE("random pilots are erased unless the raw value is requested") {
    const auto cloud = synthesize_uav_cloud(4, 0.38, 0.12, 4, 7);
    const auto motion = test::quad_motion(cloud);
    SystemConfig cfg = test::aimed_system(motion.initial_position, 4, 32);
    const auto traj = simulate_trajectory(cloud, motion, cfg.symbols, cfg.symbol_interval, 1);
    const auto fading = make_fading(cloud.point_count(), FadingModel::Constant, 0);
    const auto plain = synthesize_echo(traj, fading, cfg);

    cfg.pilot_scheme = PilotScheme::RandomUnitModulus;
    cfg.pilot_seed = 5;
    const auto erased = synthesize_echo(traj, fading, cfg);
    cfg.store_raw = true;
    const auto raw = synthesize_echo(traj, fading, cfg);
    for (std::size_t n = 0; n < cfg.symbols; ++n) {
        for (std::size_t m = 0; m < cfg.subcarriers; ++m) {
            CHECK(std::abs(erased(n, m) - plain(n, m)) < 1e-12 * std::max(1.0, std::abs(plain(n, m))));
            const cplx s = pilot_symbol(cfg, n, m);
            CHECK(std::abs(std::abs(s) - 1.0) < 1e-15);
            CHECK(std::abs(raw(n, m) - plain(n, m) * std::conj(s)) < 1e-12 * std::max(1.0, std::abs(plain(n, m))));
        }
    }
}

TEST_CASE("fading models") {
    const auto ones = make_fading(5, FadingModel::Constant, 3);
    for (const auto& v : ones) CHECK(v == cplx(1.0, 0.0));
    const auto a = make_fading(25, FadingModel::RandomGlobalPhase, 3);
    for (const auto& v : a) {
        CHECK(v == a.front());
        CHECK(std::abs(v) == Catch::Approx(0.2).epsilon(1e-14));
    }
    CHECK(make_fading(25, FadingModel::RandomGlobalPhase, 3) == a);
    CHECK(make_fading(25, FadingModel::RandomGlobalPhase, 4) != a);
    CHECK(parse_fading_model("random-phase") == FadingModel::RandomGlobalPhase);
    CHECK_THROWS_AS(parse_fading_model("rayleigh"), ConfigError);
}

TEST_CASE("noise is calibrated to the requested SNR") {
    const auto cloud = synthesize_uav_cloud(4, 0.38, 0.12, 8, 7);
    const auto motion = test::quad_motion(cloud);
    const SystemConfig cfg = test::aimed_system(motion.initial_position, 256, 256);
    const auto traj = simulate_trajectory(cloud, motion, cfg.symbols, cfg.symbol_interval, 2);
    const auto clean = synthesize_echo(traj, make_fading(cloud.point_count(), FadingModel::Constant, 0), cfg);
    const double power = measure_signal_power(clean);
    for (double snr : {-10.0, 0.0, 10.0}) {
        const auto noisy = add_noise(clean, snr, 77);
        const double expected = power / std::pow(10.0, snr / 10.0);
        REQUIRE(noisy.noise_variance.has_value());
        CHECK(*noisy.noise_variance == Catch::Approx(expected).epsilon(1e-12));
        CHECK(*noisy.snr_db == snr);
        double s = 0.0;
        cplx mean(0.0, 0.0);
        for (std::size_t k = 0; k < clean.data.size(); ++k) {
            const cplx e = noisy.data[k] - clean.data[k];
            s += std::norm(e);
            mean += e;
        }
        const double n = static_cast<double>(clean.data.size());
        CHECK(std::abs(s / n / expected - 1.0) < 0.03);
        CHECK(std::abs(mean / n) < 5.0 * std::sqrt(expected / n));
    }
}

TEST_CASE("noise is deterministic in the seed and rejects degenerate input") {
    EchoMatrix e(4, 4);
    e.config.symbols = 4;
    e.config.subcarriers = 4;
    CHECK_THROWS_AS(add_noise(e, 10.0, 1), DegenerateError);
    for (auto& v : e.data) v = cplx(1.0, -1.0);
    CHECK(add_noise(e, 10.0, 1).data == add_noise(e, 10.0, 1).data);
    CHECK(add_noise(e, 10.0, 1).data != add_noise(e, 10.0, 2).data);
    const auto inf = add_noise(e, std::numeric_limits<double>::infinity(), 1);
    CHECK(inf.data == e.data);
    CHECK(inf.noiseless());
    CHECK_THROWS_AS(add_noise(add_noise(e, 0.0, 1), 0.0, 1), ConfigError);
}

TEST_CASE("echo file round-trip") {
    EchoMatrix e(3, 5);
    for (std::size_t k = 0; k < e.data.size(); ++k) e.data[k] = cplx(0.1 * k, -0.3 * k + 1.0 / 3.0);
    e.snr_db = -7.5;
    const auto path = test::temp_path("ag_echo.agec");

    write_echo(path, e, EchoDtype::C128);
    auto back = read_echo(path);
    CHECK(back.data == e.data);
    CHECK(back.snr_db == -7.5);
    CHECK(std::filesystem::file_size(path) == kEchoHeaderBytes + 15 * 16);

    write_echo(path, e, EchoDtype::C64);
    back = read_echo(path);
    CHECK(std::filesystem::file_size(path) == kEchoHeaderBytes + 15 * 8);
    for (std::size_t k = 0; k < e.data.size(); ++k) {
        CHECK(back.data[k].real() == static_cast<float>(e.data[k].real()));
        CHECK(back.data[k].imag() == static_cast<float>(e.data[k].imag()));
    }
    CHECK(back.rows == 3);
    CHECK(back.cols == 5);

    e.snr_db.reset();
    write_echo(path, e);
    CHECK_FALSE(read_echo(path).snr_db.has_value());
    CHECK_THROWS_AS(read_echo(path + ".missing"), IoError);
}

TEST_CASE("system configuration validation") {
    SystemConfig c;
    CHECK_NOTHROW(c.validate());
    c.sensing_fraction = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = SystemConfig{};
    c.tx_array.nx = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = SystemConfig{};
    c.rx_beam.psi = 1.5;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    CHECK(SystemConfig{}.spacing() == Catch::Approx(kSpeedOfLight / 52e9));
}
