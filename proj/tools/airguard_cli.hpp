#pragma once

// The `airguard` command line. run_cli() is the whole program minus main(), so
// tests can drive it in-process.
//
// Exit codes: 0 success, 1 unexpected failure, 2 usage/config/data error,
// 3 I/O error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "airguard/airguard.hpp"

namespace airguard::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

/// Master seed from AIRGUARD_SEED, if set.
inline std::optional<std::uint64_t> env_seed() {
    const char* v = std::getenv("AIRGUARD_SEED");
    if (v == nullptr || *v == '\0') return std::nullopt;
    try {
        std::size_t used = 0;
        const std::string s(v);
        if (s.front() == '-') throw std::invalid_argument("negative");
        const auto seed = std::stoull(s, &used, 0);
        if (used != s.size()) throw std::invalid_argument("trailing characters");
        return seed;
    } catch (const std::exception&) {
        throw ConfigError(std::string("AIRGUARD_SEED is not an unsigned integer: '") + v + "'");
    }
}

/// Top-level keys of a --config file; each subcommand reads the ones it uses.
inline nlohmann::json load_run_config(const std::string& path) {
    if (path.empty()) return nlohmann::json::object();
    auto j = airguard::detail::parse_json_file(path);
    airguard::detail::check_keys(
        j, {"system", "features", "fading", "beam", "snr_db", "repeats", "split", "jobs", "seed", "dtype"}, "config");
    return j;
}

struct SeedSource {
    std::uint64_t flag = 0;
    CLI::Option* opt = nullptr;

    [[nodiscard]] std::uint64_t resolve(const nlohmann::json& config) const {
        if (opt != nullptr && opt->count() > 0) return flag;
        if (config.contains("seed")) {
            try {
                return config["seed"].get<std::uint64_t>();
            } catch (const nlohmann::json::exception&) {
                throw ConfigError("config: 'seed' must be an unsigned integer");
            }
        }
        return env_seed().value_or(0);
    }
};

template <typename T>
T config_value(const nlohmann::json& config, const char* key, T fallback) {
    if (!config.contains(key)) return fallback;
    try {
        return config[key].get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("config: bad value for '") + key + "'");
    }
}

inline bool given(const CLI::Option* opt) { return opt != nullptr && opt->count() > 0; }

inline SystemConfig system_from_sources(const nlohmann::json& config, const std::string& system_path) {
    SystemConfig sys;
    if (config.contains("system")) sys = system_config_from_json(config["system"], sys);
    if (!system_path.empty()) sys = system_config_from_json(airguard::detail::parse_json_file(system_path), sys);
    return sys;
}

struct FeatureFlags {
    std::size_t n0 = 0;
    std::size_t g = 0;
    double r_min = 0.0;
    double r_max = 0.0;
    double dr = 0.0;
    std::string colormap;
    bool log_db = false;
    double floor_db = -40.0;
    bool literal_hrrp = false;
    std::size_t width = 0;
    std::size_t height = 0;
    CLI::Option* n0_opt = nullptr;
    CLI::Option* g_opt = nullptr;
    CLI::Option* r_min_opt = nullptr;
    CLI::Option* r_max_opt = nullptr;
    CLI::Option* dr_opt = nullptr;
    CLI::Option* colormap_opt = nullptr;
    CLI::Option* log_opt = nullptr;
    CLI::Option* floor_opt = nullptr;
    CLI::Option* literal_opt = nullptr;
    CLI::Option* width_opt = nullptr;
    CLI::Option* height_opt = nullptr;

    void add_image_options(CLI::App* app) {
        colormap_opt = app->add_option("--colormap", colormap, "Colormap: viridis or gray");
        log_opt = app->add_flag("--log-db", log_db, "Log-magnitude scaling for both images");
        floor_opt = app->add_option("--floor-db", floor_db, "Floor of the log scale, dB (negative)");
        width_opt = app->add_option("--width", width, "Image width, pixels");
        height_opt = app->add_option("--height", height, "Image height per feature, pixels");
    }

    void add_extraction_options(CLI::App* app) {
        n0_opt = app->add_option("--n0", n0, "Symbols per group (N0)");
        g_opt = app->add_option("--g", g, "Number of groups (G)");
        r_min_opt = app->add_option("--r-min", r_min, "HRRP window below the coarse range, m");
        r_max_opt = app->add_option("--r-max", r_max, "HRRP window above the coarse range, m");
        dr_opt = app->add_option("--dr", dr, "HRRP grid step, m");
        literal_opt = app->add_flag("--literal-hrrp", literal_hrrp, "Correlate the HRRP dictionary with the IDFT row");
        add_image_options(app);
    }

    void apply(FeatureConfig& f) const {
        if (given(n0_opt)) f.group_size = n0;
        if (given(g_opt)) f.groups = g;
        if (given(r_min_opt)) f.hrrp_r_min = r_min;
        if (given(r_max_opt)) f.hrrp_r_max = r_max;
        if (given(dr_opt)) f.hrrp_resolution = dr;
        if (given(colormap_opt)) f.colormap = colormap;
        if (given(log_opt) && log_db) f.cmd_scaling.log_db = f.hrrp_scaling.log_db = true;
        if (given(floor_opt)) f.cmd_scaling.floor_db = f.hrrp_scaling.floor_db = floor_db;
        if (given(literal_opt) && literal_hrrp) f.hrrp_matching = HrrpMatching::LiteralIdft;
        if (given(width_opt)) f.image_width = width;
        if (given(height_opt)) f.image_height = height;
    }
};

inline FeatureConfig features_from_sources(const nlohmann::json& config, const FeatureFlags& flags) {
    FeatureConfig f;
    if (config.contains("features")) f = feature_config_from_json(config["features"], f);
    flags.apply(f);
    return f;
}

inline void write_text(std::ostream& out, const nlohmann::ordered_json& summary, bool as_json,
                       const std::string& text) {
    if (as_json) {
        out << summary.dump() << '\n';
    } else {
        out << text;
    }
}

inline void ensure_directory(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
    std::string cloud, motion, system, config, out, trajectory, fading, beam, dtype;
    double snr = 0.0;
    CLI::Option* snr_opt = nullptr;
    CLI::Option* fading_opt = nullptr;
    CLI::Option* beam_opt = nullptr;
    CLI::Option* dtype_opt = nullptr;
    std::size_t symbols = 0;
    std::size_t subcarriers = 0;
    CLI::Option* symbols_opt = nullptr;
    CLI::Option* subcarriers_opt = nullptr;
    SeedSource seed;
    bool json = false;
};

inline int run_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
    const auto config = load_run_config(a.config);
    SystemConfig sys = system_from_sources(config, a.system);
    if (given(a.symbols_opt)) sys.symbols = a.symbols;
    if (given(a.subcarriers_opt)) sys.subcarriers = a.subcarriers;
    sys.validate();
    const auto fading = parse_fading_model(given(a.fading_opt) ? a.fading
                                                                 : config_value<std::string>(config, "fading", "random-phase"));
    const std::string beam = given(a.beam_opt) ? a.beam : config_value<std::string>(config, "beam", "auto");
    if (beam != "auto" && beam != "config") throw ConfigError("--beam must be 'auto' or 'config'");
    const std::string dtype_name = given(a.dtype_opt) ? a.dtype : config_value<std::string>(config, "dtype", "c64");
    if (dtype_name != "c64" && dtype_name != "c128") throw ConfigError("--dtype must be 'c64' or 'c128'");
    const std::uint64_t seed = a.seed.resolve(config);

    const auto cloud = load_point_cloud(a.cloud);
    const auto motion = load_motion_model(a.motion);
    validate_motion(motion, cloud);
    err << "simulating " << cloud.point_count() << " points x " << sys.symbols << " symbols x " << sys.subcarriers
        << " subcarriers\n";

    if (!a.trajectory.empty()) {
        const auto snaps = simulate_trajectory(cloud, motion, sys.symbols, sys.symbol_interval,
                                               rng::derive_seed(seed, "trajectory"));
        write_trajectory(a.trajectory, snaps);
    }
    EchoMatrix echo = synthesize_model_echo(cloud, motion, sys, fading, beam == "auto", seed);
    const double power = measure_signal_power(echo);
    if (given(a.snr_opt)) echo = add_noise(echo, a.snr, rng::derive_seed(seed, "noise"));
    write_echo(a.out, echo, dtype_name == "c64" ? EchoDtype::C64 : EchoDtype::C128);

    nlohmann::ordered_json summary;
    summary["points"] = cloud.point_count();
    summary["symbols"] = echo.rows;
    summary["subcarriers"] = echo.cols;
    summary["signal_power"] = power;
    summary["snr_db"] = echo.snr_db ? nlohmann::ordered_json(*echo.snr_db) : nlohmann::ordered_json(nullptr);
    summary["seed"] = seed;
    summary["out"] = a.out;
    std::ostringstream text;
    text << "L=" << cloud.point_count() << " N=" << echo.rows << " M=" << echo.cols << " signal_power=" << power
         << " snr=" << (echo.snr_db ? format_snr(*echo.snr_db) + " dB" : std::string("noiseless")) << "\nwrote "
         << a.out << '\n';
    write_text(out, summary, a.json, text.str());
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct ExtractArgs {
    std::string echo, out_dir, system, config;
    FeatureFlags features;
    bool write_agft = false;
    bool json = false;
};

inline int run_extract(const ExtractArgs& a, std::ostream& out, std::ostream& err) {
    const auto config = load_run_config(a.config);
    const SystemConfig sys = system_from_sources(config, a.system);
    const EchoMatrix echo = read_echo(a.echo, sys);
    FeatureConfig f = features_from_sources(config, a.features);
    const bool n0_set = given(a.features.n0_opt) || (config.contains("features") && config["features"].contains("group_size"));
    const bool g_set = given(a.features.g_opt) || (config.contains("features") && config["features"].contains("groups"));
    if (!g_set) {
        if (f.group_size == 0 || echo.rows % f.group_size != 0) {
            throw DimensionError("N0 = " + std::to_string(f.group_size) + " does not divide N = " +
                                 std::to_string(echo.rows));
        }
        f.groups = echo.rows / f.group_size;
    } else if (!n0_set) {
        if (f.groups == 0 || echo.rows % f.groups != 0) {
            throw DimensionError("G = " + std::to_string(f.groups) + " does not divide N = " + std::to_string(echo.rows));
        }
        f.group_size = echo.rows / f.groups;
    }
    f.validate();
    if (f.group_size * f.groups != echo.rows) {
        throw DimensionError("G * N0 = " + std::to_string(f.group_size * f.groups) + " but N = " +
                             std::to_string(echo.rows));
    }
    err << "extracting N0=" << f.group_size << " G=" << f.groups << " from " << a.echo << '\n';

    const auto features = extract_features(echo, f);
    ensure_directory(a.out_dir);
    const std::filesystem::path dir(a.out_dir);
    const auto [cmd_img, hrrp_img] = split_aggregate(features.aggregated);
    write_png((dir / "cmd.png").string(), cmd_img);
    write_png((dir / "hrrp.png").string(), hrrp_img);
    write_png((dir / "aggregated.png").string(), features.aggregated);
    if (a.write_agft) {
        write_feature_matrix((dir / "cmd.agft").string(), features.cmd.matrix, FeatureKind::Cmd);
        write_feature_matrix((dir / "hrrp.agft").string(), features.hrrp.matrix, FeatureKind::Hrrp);
    }

    nlohmann::ordered_json summary;
    summary["n0"] = f.group_size;
    summary["groups"] = f.groups;
    summary["center_bin"] = features.cmd.center_bin;
    summary["zero_row"] = features.cmd.zero_row;
    summary["hrrp_cells"] = features.hrrp.matrix.rows();
    summary["coarse_ranges_m"] = features.hrrp.coarse_ranges;
    summary["image"] = {{"width", features.aggregated.width}, {"height", features.aggregated.height}};
    std::ostringstream text;
    text << "N0=" << f.group_size << " G=" << f.groups << " cmD center bin " << features.cmd.center_bin
         << " (zero Doppler at " << features.cmd.zero_row << "), HRRP " << features.hrrp.matrix.rows() << "x"
         << features.hrrp.matrix.cols() << "\nwrote " << (dir / "aggregated.png").string() << " ("
         << features.aggregated.width << "x" << features.aggregated.height << ")\n";
    write_text(out, summary, a.json, text.str());
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct DatasetArgs {
    std::string specs, out_dir, config, fading;
    std::vector<double> snr;
    std::size_t repeats = 2;
    std::size_t jobs = 1;
    std::vector<double> split;
    bool dry_run = false;
    bool json = false;
    bool quiet = false;
    CLI::Option* snr_opt = nullptr;
    CLI::Option* repeats_opt = nullptr;
    CLI::Option* jobs_opt = nullptr;
    CLI::Option* split_opt = nullptr;
    CLI::Option* fading_opt = nullptr;
    SeedSource seed;
};

inline int run_dataset(const DatasetArgs& a, std::ostream& out, std::ostream& err) {
    const auto config = load_run_config(a.config);
    DatasetOptions opts;
    opts.system = system_from_sources(config, "");
    if (config.contains("features")) opts.features = feature_config_from_json(config["features"], opts.features);
    opts.fading = parse_fading_model(given(a.fading_opt) ? a.fading
                                                         : config_value<std::string>(config, "fading", "random-phase"));
    opts.snr_db = given(a.snr_opt) ? a.snr : config_value<std::vector<double>>(config, "snr_db", opts.snr_db);
    opts.repeats = given(a.repeats_opt) ? a.repeats : config_value<std::size_t>(config, "repeats", opts.repeats);
    opts.jobs = given(a.jobs_opt) ? a.jobs : config_value<std::size_t>(config, "jobs", opts.jobs);
    std::vector<double> split{opts.split.train, opts.split.val, opts.split.test};
    split = given(a.split_opt) ? a.split : config_value<std::vector<double>>(config, "split", split);
    if (split.size() != 3) throw ConfigError("split needs three fractions: train, val, test");
    opts.split = {split[0], split[1], split[2]};
    const std::string beam = config_value<std::string>(config, "beam", "auto");
    if (beam != "auto" && beam != "config") throw ConfigError("beam must be 'auto' or 'config'");
    opts.auto_beam = beam == "auto";
    opts.dry_run = a.dry_run;
    if (!a.quiet) {
        opts.progress = [&err](const std::string& msg) { err << msg << '\n'; };
    }
    const std::uint64_t seed = a.seed.resolve(config);
    const auto specs = load_target_specs(a.specs);
    const auto manifest = generate_dataset(specs, opts, a.out_dir, seed);

    nlohmann::ordered_json summary;
    summary["records"] = manifest.records.size();
    summary["skipped_models"] = manifest.skips.size();
    summary["train"] = manifest.count(Split::Train);
    summary["val"] = manifest.count(Split::Val);
    summary["test"] = manifest.count(Split::Test);
    summary["seed"] = seed;
    summary["manifest"] = (std::filesystem::path(a.out_dir) / "manifest.jsonl").string();
    summary["dry_run"] = a.dry_run;
    std::ostringstream text;
    text << manifest.records.size() << " records (" << manifest.skips.size() << " models skipped)\ntrain "
         << manifest.count(Split::Train) << "  val " << manifest.count(Split::Val) << "  test "
         << manifest.count(Split::Test) << "\nmanifest " << summary["manifest"].get<std::string>() << '\n';
    write_text(out, summary, a.json, text.str());
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct RenderArgs {
    std::string input, out, config;
    FeatureFlags features;
    bool json = false;
};

inline int run_render(const RenderArgs& a, std::ostream& out, std::ostream&) {
    const auto config = load_run_config(a.config);
    const FeatureConfig f = features_from_sources(config, a.features);
    const auto file = read_feature_matrix(a.input);
    const auto img = render_feature_image(file.matrix, f, file.kind);
    write_png(a.out, img);
    nlohmann::ordered_json summary;
    summary["kind"] = to_string(file.kind);
    summary["rows"] = file.matrix.rows();
    summary["cols"] = file.matrix.cols();
    summary["width"] = img.width;
    summary["height"] = img.height;
    summary["out"] = a.out;
    std::ostringstream text;
    text << to_string(file.kind) << " " << file.matrix.rows() << "x" << file.matrix.cols() << " -> " << a.out << " ("
         << img.width << "x" << img.height << ")\n";
    write_text(out, summary, a.json, text.str());
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct InspectArgs {
    std::string path;
    bool json = false;
};

inline int run_inspect(const InspectArgs& a, std::ostream& out, std::ostream&) {
    std::ifstream in(a.path, std::ios::binary);
    if (!in) throw IoError("cannot open " + a.path);
    char magic[4] = {0, 0, 0, 0};
    in.read(magic, 4);
    in.close();
    const std::string m(magic, 4);
    nlohmann::ordered_json s;
    std::ostringstream text;
    if (m == "AGEC") {
        const auto h = read_echo_header(a.path);
        s["format"] = "AGEC";
        s["version"] = h.version;
        s["symbols"] = h.rows;
        s["subcarriers"] = h.cols;
        s["dtype"] = h.dtype == EchoDtype::C64 ? "c64" : "c128";
        s["snr_db"] = h.snr_db() ? nlohmann::ordered_json(*h.snr_db()) : nlohmann::ordered_json(nullptr);
        text << "AGEC v" << h.version << "  N=" << h.rows << " M=" << h.cols << " dtype=" << s["dtype"].get<std::string>()
             << " snr=" << (h.snr_db() ? format_snr(*h.snr_db()) + " dB" : std::string("noiseless")) << '\n';
    } else if (m == "AGFT") {
        const auto f = read_feature_matrix(a.path);
        s["format"] = "AGFT";
        s["kind"] = to_string(f.kind);
        s["rows"] = f.matrix.rows();
        s["cols"] = f.matrix.cols();
        s["max"] = f.matrix.max();
        text << "AGFT " << to_string(f.kind) << "  " << f.matrix.rows() << "x" << f.matrix.cols()
             << " max=" << f.matrix.max() << '\n';
    } else if (m == "AGTR") {
        const auto t = read_trajectory(a.path);
        s["format"] = "AGTR";
        s["symbols"] = t.size();
        s["points"] = t.empty() ? 0 : t.front().points.size();
        text << "AGTR  N=" << t.size() << " L=" << s["points"].get<std::size_t>() << '\n';
    } else if (m == "\x89PNG") {
        const auto img = read_png(a.path);
        s["format"] = "PNG";
        s["width"] = img.width;
        s["height"] = img.height;
        text << "PNG  " << img.width << "x" << img.height << " RGB\n";
    } else {
        throw ParseError(a.path + ": unrecognized file format");
    }
    write_text(out, s, a.json, text.str());
    return kExitOk;
}

// ---------------------------------------------------------------------------

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"UAV and bird echo simulation and micro-Doppler/HRRP feature extraction", "airguard"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Help for every subcommand");

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Synthesize an echo matrix (AGEC) for one target");
    simulate->add_option("--cloud", sim.cloud, "Scattering point cloud (JSON)")->required();
    simulate->add_option("--motion", sim.motion, "Motion model (JSON)")->required();
    simulate->add_option("--out", sim.out, "Output echo file")->required();
    simulate->add_option("--system", sim.system, "System configuration (JSON)");
    simulate->add_option("--config", sim.config, "Run configuration (JSON); flags win");
    sim.snr_opt = simulate->add_option("--snr", sim.snr, "Add noise at this SNR, dB");
    sim.symbols_opt = simulate->add_option("--symbols", sim.symbols, "Number of OFDM symbols N");
    sim.subcarriers_opt = simulate->add_option("--subcarriers", sim.subcarriers, "Number of subcarriers M");
    sim.fading_opt = simulate->add_option("--fading", sim.fading, "constant or random-phase");
    sim.beam_opt = simulate->add_option("--beam", sim.beam, "auto (aim at the initial position) or config");
    sim.dtype_opt = simulate->add_option("--dtype", sim.dtype, "c64 or c128");
    simulate->add_option("--trajectory", sim.trajectory, "Also write the trajectory (AGTR)");
    sim.seed.opt = simulate->add_option("--seed", sim.seed.flag, "Master seed (default: AIRGUARD_SEED or 0)");
    simulate->add_flag("--json", sim.json, "Print a JSON summary");

    ExtractArgs ext;
    auto* extract = app.add_subcommand("extract", "Extract cmD and HRRP images from an echo file");
    extract->add_option("--echo", ext.echo, "Input echo file (AGEC)")->required();
    extract->add_option("--out-dir", ext.out_dir, "Output directory")->required();
    extract->add_option("--system", ext.system, "System configuration (JSON) the echo was made with");
    extract->add_option("--config", ext.config, "Run configuration (JSON); flags win");
    ext.features.add_extraction_options(extract);
    extract->add_flag("--features", ext.write_agft, "Also write raw AGFT feature matrices");
    extract->add_flag("--json", ext.json, "Print a JSON summary");

    DatasetArgs ds;
    auto* dataset = app.add_subcommand("dataset", "Generate an image dataset with manifest");
    dataset->add_option("--specs", ds.specs, "Target spec file (JSON array)")->required();
    dataset->add_option("--out-dir", ds.out_dir, "Output directory")->required();
    dataset->add_option("--config", ds.config, "Run configuration (JSON); flags win");
    ds.snr_opt = dataset->add_option("--snr", ds.snr, "SNR list, dB")->delimiter(',');
    ds.repeats_opt = dataset->add_option("--repeats", ds.repeats, "Noise repeats per SNR");
    ds.jobs_opt = dataset->add_option("--jobs", ds.jobs, "Worker threads");
    ds.split_opt = dataset->add_option("--split", ds.split, "train,val,test fractions")->delimiter(',');
    ds.fading_opt = dataset->add_option("--fading", ds.fading, "constant or random-phase");
    ds.seed.opt = dataset->add_option("--seed", ds.seed.flag, "Master seed (default: AIRGUARD_SEED or 0)");
    dataset->add_flag("--dry-run", ds.dry_run, "Write the manifest only");
    dataset->add_flag("--quiet", ds.quiet, "No progress output");
    dataset->add_flag("--json", ds.json, "Print a JSON summary");

    RenderArgs rnd;
    auto* render = app.add_subcommand("render", "Render an AGFT feature matrix to PNG");
    render->add_option("--input", rnd.input, "Feature matrix (AGFT)")->required();
    render->add_option("--out", rnd.out, "Output PNG")->required();
    render->add_option("--config", rnd.config, "Run configuration (JSON); flags win");
    rnd.features.add_image_options(render);
    render->add_flag("--json", rnd.json, "Print a JSON summary");

    InspectArgs ins;
    auto* inspect = app.add_subcommand("inspect", "Print the header of an AGEC, AGFT, AGTR or PNG file");
    inspect->add_option("path", ins.path, "File to inspect")->required();
    inspect->add_flag("--json", ins.json, "Print JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (*simulate) return run_simulate(sim, out, err);
        if (*extract) return run_extract(ext, out, err);
        if (*dataset) return run_dataset(ds, out, err);
        if (*render) return run_render(rnd, out, err);
        if (*inspect) return run_inspect(ins, out, err);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace airguard::cli
