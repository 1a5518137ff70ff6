#pragma once

// Beamformed OFDM echo synthesis for an extended target on a pair of uniform
// planar arrays (transmit HU-UPA, receive RU-UPA) at the origin.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "airguard/binary_io.hpp"
#include "airguard/common.hpp"
#include "airguard/kinematics.hpp"
#include "airguard/rng.hpp"

namespace airguard {

struct ArrayDims {
    int nx = 8;
    int nz = 8;
    [[nodiscard]] int count() const noexcept { return nx * nz; }
    friend bool operator==(const ArrayDims&, const ArrayDims&) = default;
};

/// Spatial-domain direction: psi = cos(phi) cos(theta), omega = sin(phi).
struct BeamDirection {
    double psi = 0.0;
    double omega = 0.0;
    friend bool operator==(const BeamDirection&, const BeamDirection&) = default;
};

inline BeamDirection spatial_direction(double theta, double phi) {
    return {std::cos(phi) * std::cos(theta), std::sin(phi)};
}

inline BeamDirection spatial_direction(const Vec3& p) {
    const SphericalPoint s = cart_to_sph(p);
    return spatial_direction(s.theta, s.phi);
}

enum class PilotScheme { UnitConstant, RandomUnitModulus };

struct SystemConfig {
    double f0 = 26e9;         // lowest subcarrier frequency, Hz
    double delta_f = 480e3;   // subcarrier spacing, Hz
    std::size_t subcarriers = 256;   // M
    double symbol_interval = 10e-6;  // Ts, including guard
    std::size_t symbols = 2560;      // N per recognition frame
    ArrayDims tx_array{};
    ArrayDims rx_array{};
    std::optional<double> element_spacing_m;  // defaults to half a wavelength at f0
    double transmit_power = 1.0;              // Pt, W
    double sensing_fraction = 1.0;            // rho_s
    BeamDirection tx_beam{};
    BeamDirection rx_beam{};
    PilotScheme pilot_scheme = PilotScheme::UnitConstant;
    std::uint64_t pilot_seed = 0;
    // Store the received y instead of the pilot-erased value.
    bool store_raw = false;

    [[nodiscard]] double spacing() const { return element_spacing_m.value_or(kSpeedOfLight / (2.0 * f0)); }
    [[nodiscard]] double bandwidth() const { return static_cast<double>(subcarriers) * delta_f; }
    [[nodiscard]] double subcarrier_frequency(std::size_t m) const { return f0 + static_cast<double>(m) * delta_f; }

    void validate() const {
        if (subcarriers < 1 || symbols < 1) throw ConfigError("M and N must be >= 1");
        if (tx_array.nx < 1 || tx_array.nz < 1 || rx_array.nx < 1 || rx_array.nz < 1) {
            throw ConfigError("array dimensions must be >= 1");
        }
        if (!(f0 > 0.0) || !(delta_f > 0.0) || !(symbol_interval > 0.0) || !(transmit_power > 0.0)) {
            throw ConfigError("f0, delta_f, Ts and Pt must be > 0");
        }
        if (!(sensing_fraction > 0.0 && sensing_fraction <= 1.0)) throw ConfigError("rho_s must be in (0, 1]");
        if (!(spacing() > 0.0)) throw ConfigError("element spacing must be > 0");
        for (const auto& b : {tx_beam, rx_beam}) {
            if (!(std::abs(b.psi) <= 1.0 && std::abs(b.omega) <= 1.0)) throw ConfigError("beam direction outside [-1, 1]");
        }
    }

    friend bool operator==(const SystemConfig&, const SystemConfig&) = default;
};

/// a_x(psi) (x) a_z(omega); element ix * nz + iz has phase 2*pi*f0*d*(psi*ix + omega*iz)/c.
inline std::vector<cplx> steering_vector(double psi, double omega, int nx, int nz, double f0, double spacing) {
    if (nx < 1 || nz < 1) throw ConfigError("array dimensions must be >= 1");
    const double kappa = 2.0 * kPi * f0 * spacing / kSpeedOfLight;
    std::vector<cplx> ax(static_cast<std::size_t>(nx));
    std::vector<cplx> az(static_cast<std::size_t>(nz));
    for (int i = 0; i < nx; ++i) ax[static_cast<std::size_t>(i)] = std::polar(1.0, kappa * psi * i);
    for (int i = 0; i < nz; ++i) az[static_cast<std::size_t>(i)] = std::polar(1.0, kappa * omega * i);
    std::vector<cplx> out;
    out.reserve(static_cast<std::size_t>(nx * nz));
    for (const auto& x : ax) {
        for (const auto& z : az) out.push_back(x * z);
    }
    return out;
}

namespace detail {

/// sum_{k<n} exp(j*kappa*delta*k)
inline cplx array_factor(double kappa, double delta, int n) {
    const cplx step = std::polar(1.0, kappa * delta);
    cplx term(1.0, 0.0);
    cplx sum(0.0, 0.0);
    for (int k = 0; k < n; ++k) {
        sum += term;
        term *= step;
    }
    return sum;
}

/// exp(-j*2*pi*cycles) with the integer part of `cycles` removed first.
inline cplx unit_phasor_cycles(double cycles) {
    const double frac = cycles - std::floor(cycles);
    return std::polar(1.0, -2.0 * kPi * frac);
}

}  // namespace detail

/// Receive combining gain w^H a_R(psi, omega) with w = a_R(rx_beam) / sqrt(N_R).
inline cplx rx_beam_response(const SystemConfig& cfg, double psi, double omega) {
    const double kappa = 2.0 * kPi * cfg.f0 * cfg.spacing() / kSpeedOfLight;
    return detail::array_factor(kappa, psi - cfg.rx_beam.psi, cfg.rx_array.nx) *
           detail::array_factor(kappa, omega - cfg.rx_beam.omega, cfg.rx_array.nz) /
           std::sqrt(static_cast<double>(cfg.rx_array.count()));
}

/// Transmit gain a_H^T(psi, omega) conj(x_hat) without the pilot, where
/// x_hat = sqrt(rho_s * Pt / N_H) a_H(tx_beam).
inline cplx tx_beam_response(const SystemConfig& cfg, double psi, double omega) {
    const double kappa = 2.0 * kPi * cfg.f0 * cfg.spacing() / kSpeedOfLight;
    const double nh = static_cast<double>(cfg.tx_array.count());
    return std::sqrt(cfg.sensing_fraction * cfg.transmit_power / nh) *
           detail::array_factor(kappa, psi - cfg.tx_beam.psi, cfg.tx_array.nx) *
           detail::array_factor(kappa, omega - cfg.tx_beam.omega, cfg.tx_array.nz);
}

/// Sensing pilot s_{n,m}; both schemes are unit modulus.
inline cplx pilot_symbol(const SystemConfig& cfg, std::size_t n, std::size_t m) {
    if (cfg.pilot_scheme == PilotScheme::UnitConstant) return {1.0, 0.0};
    const std::uint64_t bits = rng::splitmix64_mix(rng::derive_seed(cfg.pilot_seed, "pilot") ^ (n * cfg.subcarriers + m));
    const double angle = kPi / 4.0 * static_cast<double>(2 * (bits & 3U) + 1);
    return std::polar(1.0, angle);
}

enum class FadingModel { Constant, RandomGlobalPhase };

inline std::string to_string(FadingModel f) { return f == FadingModel::Constant ? "constant" : "random-phase"; }

inline FadingModel parse_fading_model(const std::string& s) {
    if (s == "constant") return FadingModel::Constant;
    if (s == "random-phase") return FadingModel::RandomGlobalPhase;
    throw ConfigError("unknown fading model: " + s);
}

/// Per-scatterer fading. Constant: all ones. RandomGlobalPhase: A / sqrt(L) with
/// one unit-magnitude A of uniform random phase shared by every scatterer.
inline std::vector<cplx> make_fading(std::size_t point_count, FadingModel model, std::uint64_t seed) {
    if (model == FadingModel::Constant) return std::vector<cplx>(point_count, cplx(1.0, 0.0));
    rng::Xoshiro256 gen(rng::derive_seed(seed, "fading"));
    const cplx a = std::polar(1.0 / std::sqrt(static_cast<double>(point_count)), 2.0 * kPi * gen.uniform());
    return std::vector<cplx>(point_count, a);
}

struct EchoMatrix {
    std::size_t rows = 0;  // N symbols
    std::size_t cols = 0;  // M subcarriers
    std::vector<cplx> data;
    SystemConfig config;
    FadingModel fading = FadingModel::Constant;
    std::optional<double> snr_db;          // empty while noiseless
    std::optional<double> noise_variance;  // sigma^2 actually injected

    EchoMatrix() = default;
    EchoMatrix(std::size_t n, std::size_t m) : rows(n), cols(m), data(n * m) {}

    cplx& operator()(std::size_t n, std::size_t m) { return data[n * cols + m]; }
    const cplx& operator()(std::size_t n, std::size_t m) const { return data[n * cols + m]; }
    [[nodiscard]] std::span<const cplx> row(std::size_t n) const { return {data.data() + n * cols, cols}; }
    [[nodiscard]] std::span<cplx> row(std::size_t n) { return {data.data() + n * cols, cols}; }
    [[nodiscard]] bool noiseless() const noexcept { return !snr_db.has_value(); }
};

/// Accumulates one echo row per trajectory snapshot.
///
/// For each scatterer the angular gains are separable array factors
/// (O(Nx + Nz) per scatterer) and the subcarrier phases follow the recurrence
/// exp(-j4pi f_m r/c) = exp(-j4pi f0 r/c) * exp(-j4pi df r/c)^m, so one symbol
/// costs O(L * (N_H + N_R) + L * M).
class EchoSynthesizer {
public:
    EchoSynthesizer(const SystemConfig& cfg, std::span<const cplx> fading)
        : cfg_(cfg), fading_(fading.begin(), fading.end()) {
        cfg_.validate();
    }

    void synthesize_row(const TrajectorySnapshot& snap, std::span<cplx> out) const {
        if (snap.points.size() != fading_.size()) {
            throw DimensionError("snapshot has " + std::to_string(snap.points.size()) + " points, fading has " +
                                 std::to_string(fading_.size()));
        }
        if (out.size() != cfg_.subcarriers) throw DimensionError("output row length does not match M");
        std::fill(out.begin(), out.end(), cplx(0.0, 0.0));
        const std::size_t m_count = cfg_.subcarriers;
        for (std::size_t l = 0; l < snap.points.size(); ++l) {
            const auto& p = snap.points[l];
            const BeamDirection dir = spatial_direction(p.theta, p.phi);
            const cplx gain = fading_[l] * rx_beam_response(cfg_, dir.psi, dir.omega) *
                              tx_beam_response(cfg_, dir.psi, dir.omega);
            if (gain == cplx(0.0, 0.0)) continue;
            cplx phasor = gain * detail::unit_phasor_cycles(2.0 * p.r * cfg_.f0 / kSpeedOfLight);
            const cplx step = detail::unit_phasor_cycles(2.0 * p.r * cfg_.delta_f / kSpeedOfLight);
            for (std::size_t m = 0; m < m_count; ++m) {
                out[m] += phasor;
                phasor *= step;
            }
        }
        if (cfg_.pilot_scheme != PilotScheme::UnitConstant) {
            // The conjugated transmit vector carries conj(s); erasure divides it back out.
            for (std::size_t m = 0; m < m_count; ++m) {
                const cplx s_conj = std::conj(pilot_symbol(cfg_, snap.symbol_index, m));
                out[m] *= s_conj;
                if (!cfg_.store_raw) out[m] /= s_conj;
            }
        }
    }

    [[nodiscard]] const SystemConfig& config() const noexcept { return cfg_; }

private:
    SystemConfig cfg_;
    std::vector<cplx> fading_;
};

/// Noiseless beamformed, pilot-erased echo matrix Y (N x M).
inline EchoMatrix synthesize_echo(std::span<const TrajectorySnapshot> trajectory, std::span<const cplx> fading,
                                  const SystemConfig& cfg, FadingModel fading_model = FadingModel::Constant) {
    if (trajectory.size() != cfg.symbols) {
        throw DimensionError("trajectory has " + std::to_string(trajectory.size()) + " snapshots, config N = " +
                             std::to_string(cfg.symbols));
    }
    EchoSynthesizer synth(cfg, fading);
    EchoMatrix echo(cfg.symbols, cfg.subcarriers);
    echo.config = cfg;
    echo.fading = fading_model;
    for (std::size_t n = 0; n < trajectory.size(); ++n) synth.synthesize_row(trajectory[n], echo.row(n));
    return echo;
}

/// Streams the trajectory generator straight into the echo matrix.
inline EchoMatrix synthesize_echo(TrajectoryGenerator& generator, std::span<const cplx> fading,
                                  const SystemConfig& cfg, FadingModel fading_model = FadingModel::Constant) {
    EchoSynthesizer synth(cfg, fading);
    EchoMatrix echo(cfg.symbols, cfg.subcarriers);
    echo.config = cfg;
    echo.fading = fading_model;
    for (std::size_t n = 0; n < cfg.symbols; ++n) synth.synthesize_row(generator.next(), echo.row(n));
    return echo;
}

/// Mean |y|^2 over all entries.
inline double measure_signal_power(const EchoMatrix& echo) {
    if (echo.data.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& v : echo.data) sum += std::norm(v);
    return sum / static_cast<double>(echo.data.size());
}

/// Adds circular complex Gaussian noise with sigma^2 = P_signal / 10^(snr/10).
/// Entry k draws from counter (seed, k), so the result does not depend on evaluation order.
/// snr_db = +infinity means noiseless and returns the echo unchanged.
inline EchoMatrix add_noise(const EchoMatrix& echo, double snr_db, std::uint64_t seed) {
    if (!echo.noiseless()) throw ConfigError("echo already contains noise");
    if (std::isinf(snr_db) && snr_db > 0.0) return echo;
    if (std::isnan(snr_db)) throw ConfigError("SNR is NaN");
    const double power = measure_signal_power(echo);
    if (!(power > 0.0)) throw DegenerateError("cannot calibrate noise against a zero-power echo");
    const double variance = power / std::pow(10.0, snr_db / 10.0);
    const double scale = std::sqrt(variance / 2.0);
    const std::uint64_t key = rng::derive_seed(seed, "noise");
    EchoMatrix out = echo;
    for (std::size_t k = 0; k < out.data.size(); ++k) {
        const auto g = rng::counter_gaussian(key, k);
        out.data[k] += cplx(scale * g[0], scale * g[1]);
    }
    out.snr_db = snr_db;
    out.noise_variance = variance;
    return out;
}

// ---------------------------------------------------------------------------
// AGEC echo file: "AGEC", u16 version, u32 N, u32 M, u8 dtype, i32 SNR in milli-dB
// (INT32_MIN when noiseless), then row-major interleaved re/im.

enum class EchoDtype : std::uint8_t { C64 = 0, C128 = 1 };

inline constexpr std::uint16_t kEchoFormatVersion = 1;
inline constexpr std::int32_t kNoiselessSentinel = std::numeric_limits<std::int32_t>::min();

struct EchoFileHeader {
    std::uint16_t version = kEchoFormatVersion;
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    EchoDtype dtype = EchoDtype::C64;
    std::int32_t snr_mdb = kNoiselessSentinel;

    [[nodiscard]] std::optional<double> snr_db() const {
        if (snr_mdb == kNoiselessSentinel) return std::nullopt;
        return snr_mdb / 1000.0;
    }
};

inline constexpr std::size_t kEchoHeaderBytes = 4 + 2 + 4 + 4 + 1 + 4;

inline void write_echo(const std::string& path, const EchoMatrix& echo, EchoDtype dtype = EchoDtype::C64) {
    io::ByteWriter w;
    w.put_magic("AGEC");
    w.put_uint<std::uint16_t>(kEchoFormatVersion);
    w.put_uint<std::uint32_t>(static_cast<std::uint32_t>(echo.rows));
    w.put_uint<std::uint32_t>(static_cast<std::uint32_t>(echo.cols));
    w.put_uint<std::uint8_t>(static_cast<std::uint8_t>(dtype));
    w.put_i32(echo.snr_db ? static_cast<std::int32_t>(std::llround(*echo.snr_db * 1000.0)) : kNoiselessSentinel);
    for (const auto& v : echo.data) {
        if (dtype == EchoDtype::C64) {
            w.put_f32(static_cast<float>(v.real()));
            w.put_f32(static_cast<float>(v.imag()));
        } else {
            w.put_f64(v.real());
            w.put_f64(v.imag());
        }
    }
    w.write_file(path);
}

inline EchoFileHeader read_echo_header(io::ByteReader& r) {
    r.expect_magic("AGEC");
    EchoFileHeader h;
    h.version = r.get_uint<std::uint16_t>();
    if (h.version != kEchoFormatVersion) throw ParseError("unsupported AGEC version " + std::to_string(h.version));
    h.rows = r.get_uint<std::uint32_t>();
    h.cols = r.get_uint<std::uint32_t>();
    const auto dtype = r.get_uint<std::uint8_t>();
    if (dtype > 1) throw ParseError("unknown AGEC dtype " + std::to_string(dtype));
    h.dtype = static_cast<EchoDtype>(dtype);
    h.snr_mdb = r.get_i32();
    return h;
}

inline EchoFileHeader read_echo_header(const std::string& path) {
    auto r = io::ByteReader::from_file(path);
    return read_echo_header(r);
}

/// Reads an AGEC file. The header does not carry the system configuration, so
/// `config` supplies it; its M and N are overwritten from the file.
inline EchoMatrix read_echo(const std::string& path, SystemConfig config = {}) {
    auto r = io::ByteReader::from_file(path);
    const EchoFileHeader h = read_echo_header(r);
    const std::size_t elem = h.dtype == EchoDtype::C64 ? 8 : 16;
    if (r.remaining() != static_cast<std::size_t>(h.rows) * h.cols * elem) throw ParseError("AGEC payload size mismatch");
    EchoMatrix echo(h.rows, h.cols);
    config.symbols = h.rows;
    config.subcarriers = h.cols;
    echo.config = config;
    echo.snr_db = h.snr_db();
    for (auto& v : echo.data) {
        if (h.dtype == EchoDtype::C64) {
            const float re = r.get_f32();
            const float im = r.get_f32();
            v = cplx(re, im);
        } else {
            const double re = r.get_f64();
            const double im = r.get_f64();
            v = cplx(re, im);
        }
    }
    return echo;
}

}  // namespace airguard
