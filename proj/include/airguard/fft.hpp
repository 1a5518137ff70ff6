#pragma once

// Complex FFT: iterative radix-2 for power-of-two lengths, Bluestein's chirp-z
// algorithm on top of it for any other length. Unnormalized in both directions;
// forward uses exp(-j 2 pi k n / N).

#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "airguard/common.hpp"

namespace airguard::dsp {

inline bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_power_of_two(std::size_t n) noexcept {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

class FftPlan {
public:
    explicit FftPlan(std::size_t n) : n_(n) {
        if (n == 0) throw DimensionError("FFT length must be >= 1");
        if (is_power_of_two(n)) {
            init_radix2(n);
        } else {
            init_bluestein(n);
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return n_; }

    void forward(std::span<cplx> data) const { transform(data, false); }

    /// Unnormalized inverse (no 1/N factor).
    void inverse(std::span<cplx> data) const { transform(data, true); }

private:
    void transform(std::span<cplx> data, bool inverse) const {
        if (data.size() != n_) throw DimensionError("FFT input length does not match plan");
        if (n_ == 1) return;
        if (inverse) {
            // inverse(x) = conj(forward(conj(x)))
            for (auto& v : data) v = std::conj(v);
            transform(data, false);
            for (auto& v : data) v = std::conj(v);
            return;
        }
        if (bluestein_) {
            run_bluestein(data);
        } else {
            run_radix2(data);
        }
    }

    void init_radix2(std::size_t n) {
        twiddles_.resize(n / 2);
        for (std::size_t k = 0; k < n / 2; ++k) {
            twiddles_[k] = std::polar(1.0, -2.0 * kPi * static_cast<double>(k) / static_cast<double>(n));
        }
        bit_reverse_.resize(n);
        std::size_t bits = 0;
        while ((std::size_t{1} << bits) < n) ++bits;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t r = 0;
            for (std::size_t b = 0; b < bits; ++b) r |= ((i >> b) & 1U) << (bits - 1 - b);
            bit_reverse_[i] = r;
        }
    }

    void run_radix2(std::span<cplx> a) const {
        const std::size_t n = a.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (i < bit_reverse_[i]) std::swap(a[i], a[bit_reverse_[i]]);
        }
        for (std::size_t len = 2; len <= n; len <<= 1) {
            const std::size_t half = len / 2;
            const std::size_t stride = n / len;
            for (std::size_t start = 0; start < n; start += len) {
                for (std::size_t k = 0; k < half; ++k) {
                    const cplx t = twiddles_[k * stride] * a[start + k + half];
                    a[start + k + half] = a[start + k] - t;
                    a[start + k] += t;
                }
            }
        }
    }

    void init_bluestein(std::size_t n) {
        const std::size_t m = next_power_of_two(2 * n - 1);
        bluestein_ = std::make_unique<FftPlan>(m);
        chirp_.resize(n);
        const std::size_t two_n = 2 * n;
        for (std::size_t k = 0; k < n; ++k) {
            // k^2 mod 2N keeps the phase argument small.
            const std::size_t k2 = (k * k) % two_n;
            chirp_[k] = std::polar(1.0, -kPi * static_cast<double>(k2) / static_cast<double>(n));
        }
        kernel_.assign(m, cplx(0.0, 0.0));
        kernel_[0] = std::conj(chirp_[0]);
        for (std::size_t k = 1; k < n; ++k) {
            kernel_[k] = std::conj(chirp_[k]);
            kernel_[m - k] = std::conj(chirp_[k]);
        }
        bluestein_->forward(kernel_);
    }

    void run_bluestein(std::span<cplx> data) const {
        const std::size_t m = bluestein_->size();
        std::vector<cplx> work(m, cplx(0.0, 0.0));
        for (std::size_t k = 0; k < n_; ++k) work[k] = data[k] * chirp_[k];
        bluestein_->forward(work);
        for (std::size_t k = 0; k < m; ++k) work[k] *= kernel_[k];
        bluestein_->inverse(work);
        const double scale = 1.0 / static_cast<double>(m);
        for (std::size_t k = 0; k < n_; ++k) data[k] = work[k] * scale * chirp_[k];
    }

    std::size_t n_;
    std::vector<cplx> twiddles_;
    std::vector<std::size_t> bit_reverse_;
    std::unique_ptr<FftPlan> bluestein_;
    std::vector<cplx> chirp_;
    std::vector<cplx> kernel_;
};

/// Forward DFT of a copy.
inline std::vector<cplx> dft(std::span<const cplx> x) {
    std::vector<cplx> out(x.begin(), x.end());
    FftPlan(out.size()).forward(out);
    return out;
}

/// Inverse DFT with the 1/N factor.
inline std::vector<cplx> idft(std::span<const cplx> x) {
    std::vector<cplx> out(x.begin(), x.end());
    FftPlan(out.size()).inverse(out);
    const double scale = 1.0 / static_cast<double>(out.size());
    for (auto& v : out) v *= scale;
    return out;
}

}  // namespace airguard::dsp
