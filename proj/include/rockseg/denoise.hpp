#pragma once

// Pre-segmentation filters. All borders use edge replication.

#include "error.hpp"
#include "image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace rockseg {

namespace detail {

inline std::size_t clamp_index(std::ptrdiff_t i, std::size_t n) noexcept
{
    if (i < 0)
        return 0;
    if (static_cast<std::size_t>(i) >= n)
        return n - 1;
    return static_cast<std::size_t>(i);
}

} // namespace detail

/// Median of a window x window neighborhood. For an even element count the
/// lower middle element is taken.
inline GrayImage median_filter(const GrayImage& img, int window)
{
    if (window < 1 || window % 2 == 0)
        throw InvalidArgument("median window must be odd and >= 1");
    if (window == 1)
        return img;
    const std::ptrdiff_t r = window / 2;
    GrayImage out(img.width(), img.height(), img.bit_depth());
    std::vector<std::uint16_t> buf;
    buf.reserve(static_cast<std::size_t>(window * window));
    const auto W = img.width(), H = img.height();
    for (std::size_t y = 0; y < H; ++y) {
        for (std::size_t x = 0; x < W; ++x) {
            buf.clear();
            for (std::ptrdiff_t dy = -r; dy <= r; ++dy)
                for (std::ptrdiff_t dx = -r; dx <= r; ++dx)
                    buf.push_back(img(detail::clamp_index(static_cast<std::ptrdiff_t>(x) + dx, W),
                                      detail::clamp_index(static_cast<std::ptrdiff_t>(y) + dy, H)));
            const auto mid = buf.begin() + static_cast<std::ptrdiff_t>((buf.size() - 1) / 2);
            std::nth_element(buf.begin(), mid, buf.end());
            out(x, y) = *mid;
        }
    }
    return out;
}

/// Normalized 1-D Gaussian taps, radius ceil(3 sigma).
inline std::vector<double> gaussian_kernel(double sigma)
{
    if (!(sigma > 0.0))
        throw InvalidArgument("gaussian sigma must be positive");
    const auto radius = static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma));
    std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (std::ptrdiff_t i = -radius; i <= radius; ++i) {
        const double w = std::exp(-static_cast<double>(i * i) / (2.0 * sigma * sigma));
        k[static_cast<std::size_t>(i + radius)] = w;
        sum += w;
    }
    for (auto& w : k)
        w /= sum;
    return k;
}

/// Separable Gaussian blur in real arithmetic (horizontal pass, then
/// vertical). Row-major output, not quantized.
inline std::vector<double> gaussian_blur_real(const GrayImage& img, double sigma)
{
    const auto k = gaussian_kernel(sigma);
    const auto radius = static_cast<std::ptrdiff_t>(k.size() / 2);
    const auto W = img.width(), H = img.height();
    std::vector<double> tmp(W * H), out(W * H);
    for (std::size_t y = 0; y < H; ++y)
        for (std::size_t x = 0; x < W; ++x) {
            double acc = 0.0;
            for (std::ptrdiff_t i = -radius; i <= radius; ++i)
                acc += k[static_cast<std::size_t>(i + radius)] *
                       img(detail::clamp_index(static_cast<std::ptrdiff_t>(x) + i, W), y);
            tmp[y * W + x] = acc;
        }
    for (std::size_t y = 0; y < H; ++y)
        for (std::size_t x = 0; x < W; ++x) {
            double acc = 0.0;
            for (std::ptrdiff_t i = -radius; i <= radius; ++i)
                acc += k[static_cast<std::size_t>(i + radius)] *
                       tmp[detail::clamp_index(static_cast<std::ptrdiff_t>(y) + i, H) * W + x];
            out[y * W + x] = acc;
        }
    return out;
}

inline GrayImage gaussian_blur(const GrayImage& img, double sigma)
{
    const auto blurred = gaussian_blur_real(img, sigma);
    GrayImage out(img.width(), img.height(), img.bit_depth());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = quantize(blurred[i], img.max_value());
    return out;
}

/// out = img + amount * (img - blur(img)), quantized once at the end.
inline GrayImage unsharp_mask(const GrayImage& img, double sigma, double amount)
{
    detail::require(amount >= 0.0, "unsharp amount must be non-negative");
    const auto blurred = gaussian_blur_real(img, sigma);
    GrayImage out(img.width(), img.height(), img.bit_depth());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double v = img[i];
        out[i] = quantize(v + amount * (v - blurred[i]), img.max_value());
    }
    return out;
}

/// Unsharp masking followed by median filtering.
inline GrayImage dual_filter(const GrayImage& img, double sigma, double amount, int window)
{
    if (window < 1 || window % 2 == 0)
        throw InvalidArgument("median window must be odd and >= 1");
    return median_filter(unsharp_mask(img, sigma, amount), window);
}

} // namespace rockseg
