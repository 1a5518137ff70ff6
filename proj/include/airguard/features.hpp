#pragma once

// Centralized micro-Doppler (cmD) and HRRP sequence spectra of an echo matrix.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "airguard/binary_io.hpp"
#include "airguard/channel.hpp"
#include "airguard/common.hpp"
#include "airguard/fft.hpp"

namespace airguard {

struct Scaling {
    bool log_db = false;
    double floor_db = -40.0;  // only used when log_db

    friend bool operator==(const Scaling&, const Scaling&) = default;
};

/// What the HRRP dictionary is correlated against.
enum class HrrpMatching {
    FrequencyDomain,  // the received subcarrier row (matched filter)
    LiteralIdft,      // the range-profile (IDFT) row
};

inline std::string to_string(HrrpMatching m) {
    return m == HrrpMatching::FrequencyDomain ? "frequency-domain" : "literal-idft";
}

inline HrrpMatching parse_hrrp_matching(const std::string& s) {
    if (s == "frequency-domain") return HrrpMatching::FrequencyDomain;
    if (s == "literal-idft") return HrrpMatching::LiteralIdft;
    throw ConfigError("unknown HRRP matching mode '" + s + "'");
}

struct FeatureConfig {
    std::size_t group_size = 128;  // N0
    std::size_t groups = 20;       // G
    double hrrp_r_min = 3.0;       // meters below the coarse estimate
    double hrrp_r_max = 3.0;       // meters above it
    double hrrp_resolution = 0.01; // Δr
    std::size_t image_width = 256;
    std::size_t image_height = 256;
    std::string colormap = "viridis";
    Scaling cmd_scaling{};
    Scaling hrrp_scaling{};
    HrrpMatching hrrp_matching = HrrpMatching::FrequencyDomain;

    /// Number of HRRP grid cells, I = (r_max + r_min + Δr) / Δr.
    [[nodiscard]] std::size_t hrrp_bins() const {
        if (!(hrrp_resolution > 0.0) || !std::isfinite(hrrp_resolution)) {
            throw ConfigError("HRRP resolution must be positive");
        }
        if (!(hrrp_r_min >= 0.0) || !(hrrp_r_max >= 0.0)) throw ConfigError("HRRP window bounds must be >= 0");
        const double ratio = (hrrp_r_max + hrrp_r_min + hrrp_resolution) / hrrp_resolution;
        const double rounded = std::round(ratio);
        if (std::abs(ratio - rounded) > 1e-6 * std::max(1.0, ratio) || rounded < 1.0) {
            throw ConfigError("HRRP window is not an integer number of cells");
        }
        return static_cast<std::size_t>(rounded);
    }

    /// Grid index of the coarse range estimate.
    [[nodiscard]] std::size_t hrrp_center_index() const {
        return static_cast<std::size_t>(std::llround(hrrp_r_min / hrrp_resolution));
    }

    void validate() const {
        if (group_size == 0 || groups == 0) throw ConfigError("group size and group count must be >= 1");
        if (image_width == 0 || image_height == 0) throw ConfigError("image size must be nonzero");
        (void)hrrp_bins();
    }
};

struct CmdSpectrum {
    RealMatrix matrix;      // N0 x G, centered and normalized
    RealMatrix uncentered;  // N0 x G, before centering; zero Doppler at zero_row
    std::size_t center_bin = 0;  // n0*, row of `uncentered`
    std::size_t zero_row = 0;    // row holding zero Doppler in `uncentered`
};

struct HrrpSpectrum {
    RealMatrix matrix;                 // I x G
    std::vector<double> coarse_ranges; // r̂_g, meters
};

struct CoarseRange {
    std::vector<double> profile;
    std::size_t bin = 0;
    double range = 0.0;
};

/// Zero-Doppler row after the half-length circular shift.
inline std::size_t cmd_zero_row(std::size_t n0) { return (n0 - n0 / 2) % n0; }

/// Yb[n] = Ya[(n + ⌊N0/2⌋) mod N0], per column of a row-major N0 x M block.
inline void shift_doppler_rows(std::span<const cplx> in, std::span<cplx> out, std::size_t n0, std::size_t m) {
    if (in.size() != n0 * m || out.size() != n0 * m) throw DimensionError("shift block size mismatch");
    const std::size_t half = n0 / 2;
    for (std::size_t r = 0; r < n0; ++r) {
        const std::size_t src = (r + half) % n0;
        std::copy_n(in.begin() + static_cast<std::ptrdiff_t>(src * m), m, out.begin() + static_cast<std::ptrdiff_t>(r * m));
    }
}

/// Column-wise N0-point DFT of the rows [first, first + N0) of the echo.
inline std::vector<cplx> doppler_transform(const EchoMatrix& echo, std::size_t first, std::size_t n0,
                                           const dsp::FftPlan& plan) {
    const std::size_t m = echo.cols;
    std::vector<cplx> block(n0 * m);
    std::vector<cplx> column(n0);
    for (std::size_t c = 0; c < m; ++c) {
        for (std::size_t r = 0; r < n0; ++r) column[r] = echo(first + r, c);
        plan.forward(column);
        for (std::size_t r = 0; r < n0; ++r) block[r * m + c] = column[r];
    }
    return block;
}

inline CmdSpectrum cmd_spectrum(const EchoMatrix& echo, const FeatureConfig& cfg) {
    const std::size_t n0 = cfg.group_size;
    const std::size_t g_count = cfg.groups;
    if (n0 == 0 || g_count == 0) throw ConfigError("group size and group count must be >= 1");
    if (echo.rows != n0 * g_count) {
        throw DimensionError("echo has " + std::to_string(echo.rows) + " symbols, expected G*N0 = " +
                             std::to_string(n0 * g_count));
    }
    const std::size_t m = echo.cols;
    if (m == 0) throw DimensionError("echo has no subcarriers");

    CmdSpectrum out;
    out.uncentered = RealMatrix(n0, g_count);
    out.zero_row = cmd_zero_row(n0);

    const dsp::FftPlan doppler_plan(n0);
    const dsp::FftPlan range_plan(m);
    const double inv_m = 1.0 / static_cast<double>(m);
    std::vector<cplx> shifted(n0 * m);
    for (std::size_t g = 0; g < g_count; ++g) {
        const auto block = doppler_transform(echo, g * n0, n0, doppler_plan);
        shift_doppler_rows(block, shifted, n0, m);
        for (std::size_t r = 0; r < n0; ++r) {
            std::span<cplx> row(shifted.data() + r * m, m);
            range_plan.inverse(row);
            double sum = 0.0;
            for (const auto& v : row) sum += std::abs(v * inv_m);
            out.uncentered(r, g) = sum;
        }
    }

    std::vector<double> row_sums(n0, 0.0);
    for (std::size_t r = 0; r < n0; ++r) {
        for (std::size_t g = 0; g < g_count; ++g) row_sums[r] += out.uncentered(r, g);
    }
    out.center_bin = argmax_first(row_sums);

    const double peak = out.uncentered.max();
    const double scale = peak > 0.0 ? 1.0 / peak : 0.0;
    out.matrix = RealMatrix(n0, g_count);
    // Window of the 3N0-row zero-padded extension that puts n0* at row ⌊N0/2⌋.
    const std::size_t half = n0 / 2;
    for (std::size_t i = 0; i < n0; ++i) {
        const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(out.center_bin + i) - static_cast<std::ptrdiff_t>(half);
        if (src < 0 || src >= static_cast<std::ptrdiff_t>(n0)) continue;
        for (std::size_t g = 0; g < g_count; ++g) {
            out.matrix(i, g) = out.uncentered(static_cast<std::size_t>(src), g) * scale;
        }
    }
    return out;
}

/// Range profile |IDFT(row)| and the coarse range of its first maximum.
inline CoarseRange hrrp_coarse_range(std::span<const cplx> echo_row, double bandwidth_hz) {
    if (echo_row.empty()) throw DimensionError("HRRP row is empty");
    if (!(bandwidth_hz > 0.0)) throw ConfigError("bandwidth must be positive");
    const auto profile = dsp::idft(echo_row);
    CoarseRange out;
    out.profile.resize(profile.size());
    for (std::size_t i = 0; i < profile.size(); ++i) out.profile[i] = std::abs(profile[i]);
    out.bin = argmax_first(out.profile);
    out.range = kSpeedOfLight * static_cast<double>(out.bin) / (2.0 * bandwidth_hz);
    return out;
}

inline HrrpSpectrum hrrp_spectrum(const EchoMatrix& echo, const FeatureConfig& cfg) {
    const std::size_t n0 = cfg.group_size;
    const std::size_t g_count = cfg.groups;
    if (n0 == 0 || g_count == 0) throw ConfigError("group size and group count must be >= 1");
    if (echo.rows < (g_count - 1) * n0 + 1) throw DimensionError("echo has too few symbols for the HRRP groups");
    const std::size_t m = echo.cols;
    if (m == 0) throw DimensionError("echo has no subcarriers");
    const std::size_t cells = cfg.hrrp_bins();
    const double delta_f = echo.config.delta_f;
    const double bandwidth = delta_f * static_cast<double>(m);

    HrrpSpectrum out;
    out.matrix = RealMatrix(cells, g_count);
    out.coarse_ranges.resize(g_count);
    std::vector<cplx> literal;
    for (std::size_t g = 0; g < g_count; ++g) {
        const auto row = echo.row(g * n0);
        const auto coarse = hrrp_coarse_range(row, bandwidth);
        out.coarse_ranges[g] = coarse.range;

        std::span<const cplx> target = row;
        if (cfg.hrrp_matching == HrrpMatching::LiteralIdft) {
            literal = dsp::idft(row);
            target = literal;
        }
        // |a^H y| with a[m] = exp(-j 4π f_m r / c); the f0 term is a unit-modulus factor.
        for (std::size_t i = 0; i < cells; ++i) {
            const double r = coarse.range - cfg.hrrp_r_min + static_cast<double>(i) * cfg.hrrp_resolution;
            const cplx step = std::conj(detail::unit_phasor_cycles(2.0 * delta_f * r / kSpeedOfLight));
            cplx z(1.0, 0.0);
            cplx acc(0.0, 0.0);
            for (std::size_t k = 0; k < m; ++k) {
                acc += target[k] * z;
                z *= step;
            }
            out.matrix(i, g) = std::abs(acc);
        }
    }
    return out;
}

// AGFT: raw feature matrix as little-endian f32.

enum class FeatureKind : std::uint8_t { Cmd = 0, Hrrp = 1 };

inline std::string to_string(FeatureKind k) { return k == FeatureKind::Cmd ? "cmD" : "HRRP"; }

struct FeatureFile {
    FeatureKind kind = FeatureKind::Cmd;
    RealMatrix matrix;
};

inline void write_feature_matrix(const std::string& path, const RealMatrix& matrix, FeatureKind kind) {
    io::ByteWriter w;
    w.put_magic("AGFT");
    w.put_uint<std::uint32_t>(static_cast<std::uint32_t>(matrix.rows()));
    w.put_uint<std::uint32_t>(static_cast<std::uint32_t>(matrix.cols()));
    w.put_uint<std::uint8_t>(static_cast<std::uint8_t>(kind));
    for (double v : matrix.data()) w.put_f32(static_cast<float>(v));
    w.write_file(path);
}

struct FeatureFileHeader {
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    FeatureKind kind = FeatureKind::Cmd;
};

inline FeatureFileHeader read_feature_header(io::ByteReader& r) {
    r.expect_magic("AGFT");
    FeatureFileHeader h;
    h.rows = r.get_uint<std::uint32_t>();
    h.cols = r.get_uint<std::uint32_t>();
    const auto kind = r.get_uint<std::uint8_t>();
    if (kind > 1) throw ParseError("AGFT: unknown feature kind " + std::to_string(kind));
    h.kind = static_cast<FeatureKind>(kind);
    return h;
}

inline FeatureFile read_feature_matrix(const std::string& path) {
    auto r = io::ByteReader::from_file(path);
    const auto h = read_feature_header(r);
    if (r.remaining() != static_cast<std::size_t>(h.rows) * h.cols * 4) throw ParseError("AGFT payload size mismatch");
    FeatureFile f;
    f.kind = h.kind;
    f.matrix = RealMatrix(h.rows, h.cols);
    for (auto& v : f.matrix.data()) v = static_cast<double>(r.get_f32());
    return f;
}

}  // namespace airguard
