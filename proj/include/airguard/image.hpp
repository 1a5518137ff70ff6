#pragma once

// Feature-matrix rendering, aggregated images and PNG IO.

#include <png.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "airguard/colormap_table.hpp"
#include "airguard/common.hpp"
#include "airguard/features.hpp"

namespace airguard {

/// 8-bit RGB, row-major, 3 bytes per pixel.
struct RgbImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;

    RgbImage() = default;
    RgbImage(std::size_t w, std::size_t h) : width(w), height(h), pixels(w * h * 3, 0) {}

    [[nodiscard]] std::array<std::uint8_t, 3> at(std::size_t x, std::size_t y) const {
        const std::size_t i = (y * width + x) * 3;
        return {pixels[i], pixels[i + 1], pixels[i + 2]};
    }
    void set(std::size_t x, std::size_t y, const std::array<std::uint8_t, 3>& rgb) {
        const std::size_t i = (y * width + x) * 3;
        pixels[i] = rgb[0];
        pixels[i + 1] = rgb[1];
        pixels[i + 2] = rgb[2];
    }

    friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

enum class Colormap { Viridis, Gray };

inline Colormap parse_colormap(const std::string& name) {
    if (name == "viridis") return Colormap::Viridis;
    if (name == "gray") return Colormap::Gray;
    throw ConfigError("unknown colormap '" + name + "'");
}

/// Color of a value in [0, 1]; values outside are clamped.
inline std::array<std::uint8_t, 3> colormap_lookup(Colormap map, double t) {
    const double clamped = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
    const auto index = static_cast<std::size_t>(std::floor(clamped * 255.0 + 0.5));
    if (map == Colormap::Gray) {
        const auto v = static_cast<std::uint8_t>(index);
        return {v, v, v};
    }
    return detail::kViridis[index];
}

struct RenderOptions {
    std::size_t width = 256;
    std::size_t height = 256;
    Colormap colormap = Colormap::Viridis;
    Scaling scaling{};
    bool normalize = true;  // divide by the matrix max first
};

/// Bilinear resize with corner pixels aligned to corner samples.
inline RealMatrix resize_bilinear(const RealMatrix& in, std::size_t out_rows, std::size_t out_cols) {
    if (in.empty()) throw DimensionError("cannot resize an empty matrix");
    RealMatrix out(out_rows, out_cols);
    const auto source = [](std::size_t i, std::size_t out_n, std::size_t in_n) {
        if (in_n == 1 || out_n == 1) return 0.0;
        return static_cast<double>(i) * static_cast<double>(in_n - 1) / static_cast<double>(out_n - 1);
    };
    for (std::size_t r = 0; r < out_rows; ++r) {
        const double sr = source(r, out_rows, in.rows());
        const auto r0 = std::min(static_cast<std::size_t>(sr), in.rows() - 1);
        const auto r1 = std::min(r0 + 1, in.rows() - 1);
        const double fr = sr - static_cast<double>(r0);
        for (std::size_t c = 0; c < out_cols; ++c) {
            const double sc = source(c, out_cols, in.cols());
            const auto c0 = std::min(static_cast<std::size_t>(sc), in.cols() - 1);
            const auto c1 = std::min(c0 + 1, in.cols() - 1);
            const double fc = sc - static_cast<double>(c0);
            const double top = in(r0, c0) * (1.0 - fc) + in(r0, c1) * fc;
            const double bottom = in(r1, c0) * (1.0 - fc) + in(r1, c1) * fc;
            out(r, c) = top * (1.0 - fr) + bottom * fr;
        }
    }
    return out;
}

/// Matrix rows map to image rows. An all-zero matrix renders as the floor color.
inline RgbImage render_feature_image(const RealMatrix& matrix, const RenderOptions& opts) {
    if (matrix.empty()) throw DimensionError("cannot render an empty matrix");
    if (opts.width == 0 || opts.height == 0) throw ConfigError("image size must be nonzero");
    RealMatrix unit = matrix;
    const double peak = matrix.max();
    const double scale = (opts.normalize && peak > 0.0) ? 1.0 / peak : 1.0;
    for (auto& v : unit.data()) {
        v = std::clamp(v * scale, 0.0, 1.0);
        if (opts.scaling.log_db) {
            const double floor_db = opts.scaling.floor_db;
            if (!(floor_db < 0.0)) throw ConfigError("log floor must be negative");
            const double db = v > 0.0 ? std::max(20.0 * std::log10(v), floor_db) : floor_db;
            v = 1.0 - db / floor_db;
        }
    }
    const RealMatrix sized = resize_bilinear(unit, opts.height, opts.width);
    RgbImage img(opts.width, opts.height);
    for (std::size_t y = 0; y < opts.height; ++y) {
        for (std::size_t x = 0; x < opts.width; ++x) img.set(x, y, colormap_lookup(opts.colormap, sized(y, x)));
    }
    return img;
}

inline RenderOptions render_options(const FeatureConfig& cfg, FeatureKind kind) {
    RenderOptions opts;
    opts.width = cfg.image_width;
    opts.height = cfg.image_height;
    opts.colormap = parse_colormap(cfg.colormap);
    opts.scaling = kind == FeatureKind::Cmd ? cfg.cmd_scaling : cfg.hrrp_scaling;
    // cmD is already normalized by the max of the uncentered matrix.
    opts.normalize = kind == FeatureKind::Hrrp;
    return opts;
}

inline RgbImage render_feature_image(const RealMatrix& matrix, const FeatureConfig& cfg, FeatureKind kind) {
    return render_feature_image(matrix, render_options(cfg, kind));
}

/// Stacks cmD on top of HRRP.
inline RgbImage aggregate_images(const RgbImage& cmd_img, const RgbImage& hrrp_img) {
    if (cmd_img.width != hrrp_img.width || cmd_img.height != hrrp_img.height || cmd_img.pixels.empty()) {
        throw DimensionError("aggregated halves must be nonempty and equally sized");
    }
    RgbImage out(cmd_img.width, cmd_img.height * 2);
    std::copy(cmd_img.pixels.begin(), cmd_img.pixels.end(), out.pixels.begin());
    std::copy(hrrp_img.pixels.begin(), hrrp_img.pixels.end(),
              out.pixels.begin() + static_cast<std::ptrdiff_t>(cmd_img.pixels.size()));
    return out;
}

inline std::pair<RgbImage, RgbImage> split_aggregate(const RgbImage& aggregated) {
    if (aggregated.height % 2 != 0 || aggregated.height == 0) throw DimensionError("aggregated image height must be even");
    const std::size_t h = aggregated.height / 2;
    RgbImage top(aggregated.width, h);
    RgbImage bottom(aggregated.width, h);
    const auto half = static_cast<std::ptrdiff_t>(top.pixels.size());
    std::copy(aggregated.pixels.begin(), aggregated.pixels.begin() + half, top.pixels.begin());
    std::copy(aggregated.pixels.begin() + half, aggregated.pixels.end(), bottom.pixels.begin());
    return {std::move(top), std::move(bottom)};
}

inline void write_png(const std::string& path, const RgbImage& img) {
    if (img.pixels.size() != img.width * img.height * 3 || img.pixels.empty()) {
        throw DimensionError("image buffer does not match its dimensions");
    }
    png_image info{};
    info.version = PNG_IMAGE_VERSION;
    info.width = static_cast<png_uint_32>(img.width);
    info.height = static_cast<png_uint_32>(img.height);
    info.format = PNG_FORMAT_RGB;
    if (png_image_write_to_file(&info, path.c_str(), 0, img.pixels.data(), 0, nullptr) == 0) {
        const std::string msg = info.message;
        png_image_free(&info);
        throw IoError("cannot write PNG '" + path + "': " + msg);
    }
}

inline RgbImage read_png(const std::string& path) {
    png_image info{};
    info.version = PNG_IMAGE_VERSION;
    if (png_image_begin_read_from_file(&info, path.c_str()) == 0) {
        const std::string msg = info.message;
        png_image_free(&info);
        throw IoError("cannot read PNG '" + path + "': " + msg);
    }
    info.format = PNG_FORMAT_RGB;
    RgbImage img(info.width, info.height);
    if (png_image_finish_read(&info, nullptr, img.pixels.data(), 0, nullptr) == 0) {
        const std::string msg = info.message;
        png_image_free(&info);
        throw ParseError("cannot decode PNG '" + path + "': " + msg);
    }
    return img;
}

}  // namespace airguard
