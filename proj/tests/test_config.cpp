#include <catch_amalgamated.hpp>

#include <fstream>

#include "airguard/config_json.hpp"
#include "test_support.hpp"

using namespace airguard;

TEST_CASE("system config survives a JSON round-trip") {
    SystemConfig c;
    c.f0 = 24e9;
    c.subcarriers = 128;
    c.tx_array = {4, 2};
    c.element_spacing_m = 0.006;
    c.tx_beam = {0.3, -0.2};
    c.pilot_scheme = PilotScheme::RandomUnitModulus;
    c.pilot_seed = 99;
    c.store_raw = true;
    const auto j = nlohmann::json::parse(system_config_to_json(c).dump());
    CHECK(system_config_from_json(j) == c);
    CHECK(system_config_from_json(nlohmann::json::object()) == SystemConfig{});
}

TEST_CASE("partial system config overrides only the listed fields") {
    const auto j = nlohmann::json::parse(R"({"subcarriers": 64, "rx_array": {"nx": 2}})");
    const auto c = system_config_from_json(j);
    CHECK(c.subcarriers == 64);
    CHECK(c.rx_array.nx == 2);
    CHECK(c.rx_array.nz == 8);
    CHECK(c.f0 == 26e9);
}

TEST_CASE("unknown or mistyped keys are rejected") {
    CHECK_THROWS_AS(system_config_from_json(nlohmann::json::parse(R"({"subcarrier": 64})")), ConfigError);
    CHECK_THROWS_AS(system_config_from_json(nlohmann::json::parse(R"({"f0": "high"})")), ConfigError);
    CHECK_THROWS_AS(system_config_from_json(nlohmann::json::parse(R"({"sensing_fraction": 2.0})")), ConfigError);
    CHECK_THROWS_AS(feature_config_from_json(nlohmann::json::parse(R"({"n0": 64})")), ConfigError);
    CHECK_THROWS_AS(motion_from_json(nlohmann::json::parse(R"({"speed": [1, 2, 3]})")), ConfigError);
}

TEST_CASE("feature config round-trip including scaling and matching") {
    FeatureConfig c;
    c.group_size = 64;
    c.groups = 40;
    c.colormap = "gray";
    c.hrrp_scaling = Scaling{true, -30.0};
    c.hrrp_matching = HrrpMatching::LiteralIdft;
    const auto j = nlohmann::json::parse(feature_config_to_json(c).dump());
    const auto back = feature_config_from_json(j);
    CHECK(back.group_size == 64);
    CHECK(back.groups == 40);
    CHECK(back.colormap == "gray");
    CHECK(back.hrrp_scaling == c.hrrp_scaling);
    CHECK(back.cmd_scaling == Scaling{});
    CHECK(back.hrrp_matching == HrrpMatching::LiteralIdft);
    CHECK_THROWS_AS(feature_config_from_json(nlohmann::json::parse(R"({"hrrp_resolution": 0.007})")), ConfigError);
}

TEST_CASE("motion model round-trip for UAV and bird") {
    const auto cloud = synthesize_uav_cloud(4, 0.38, 0.12, 5, 7);
    TargetMotionModel m = test::quad_motion(cloud);
    m.jitter[1] = {0.001, 1e-6};
    m.initial_attitude = {0.1, 0.2, 0.3};
    CHECK(motion_from_json(nlohmann::json::parse(motion_to_json(m).dump())) == m);
    const auto b = test::bird_motion();
    CHECK(motion_from_json(nlohmann::json::parse(motion_to_json(b).dump())) == b);
}

TEST_CASE("shipped example files load") {
    const std::string dir = AIRGUARD_DATA_DIR;
    const auto quad = load_point_cloud(dir + "/quad_cloud.json");
    const auto quad_motion = load_motion_model(dir + "/quad_motion.json");
    CHECK_NOTHROW(validate_motion(quad_motion, quad));
    const auto bird = load_point_cloud(dir + "/pigeon_cloud.json");
    const auto bird_motion = load_motion_model(dir + "/pigeon_motion.json");
    CHECK_NOTHROW(validate_motion(bird_motion, bird));
    CHECK(system_config_from_json(detail::parse_json_file(dir + "/system_desk.json")) == SystemConfig{});
}

TEST_CASE("JSON file errors") {
    CHECK_THROWS_AS(detail::parse_json_file("/nonexistent/x.json"), IoError);
    const auto path = test::temp_path("ag_broken.json");
    std::ofstream(path) << "{ \"a\": ";
    CHECK_THROWS_AS(detail::parse_json_file(path), ParseError);
}
