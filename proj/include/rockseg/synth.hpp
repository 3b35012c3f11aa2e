#pragma once

// Synthetic porous-rock fixtures: bright matrix, dark disk-shaped pores,
// optional additive Gaussian noise.

#include "error.hpp"
#include "image.hpp"
#include "rng.hpp"

#include <cstdint>
#include <vector>

namespace rockseg {

struct Disk {
    std::int64_t cx = 0;
    std::int64_t cy = 0;
    std::int64_t radius = 0;

    friend bool operator==(const Disk&, const Disk&) = default;
};

struct FixtureParams {
    std::size_t width = 128;
    std::size_t height = 128;
    std::size_t n_pores = 10;
    std::int64_t min_radius = 3;
    std::int64_t max_radius = 8;
    double noise_sigma = 0.0;
    int bit_depth = 8;
};

struct Fixture {
    GrayImage image;
    BinaryMask mask;
    std::vector<Disk> disks;
};

/// Matrix and pore intensities used by the fixtures: 80% and 20% of range.
inline std::uint16_t matrix_intensity(int bit_depth)
{
    return quantize(0.8 * GrayImage::max_for_depth(bit_depth), GrayImage::max_for_depth(bit_depth));
}

inline std::uint16_t pore_intensity(int bit_depth)
{
    return quantize(0.2 * GrayImage::max_for_depth(bit_depth), GrayImage::max_for_depth(bit_depth));
}

/// Marks every pixel with (x-cx)^2 + (y-cy)^2 <= r^2 for any disk.
inline BinaryMask rasterize_disks(std::size_t width, std::size_t height, const std::vector<Disk>& disks)
{
    BinaryMask mask(width, height);
    for (const auto& d : disks) {
        const auto r2 = d.radius * d.radius;
        const auto x0 = std::max<std::int64_t>(0, d.cx - d.radius);
        const auto x1 = std::min<std::int64_t>(static_cast<std::int64_t>(width) - 1, d.cx + d.radius);
        const auto y0 = std::max<std::int64_t>(0, d.cy - d.radius);
        const auto y1 = std::min<std::int64_t>(static_cast<std::int64_t>(height) - 1, d.cy + d.radius);
        for (auto y = y0; y <= y1; ++y)
            for (auto x = x0; x <= x1; ++x) {
                const auto dx = x - d.cx, dy = y - d.cy;
                if (dx * dx + dy * dy <= r2)
                    mask(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = 1;
            }
    }
    return mask;
}

/// Perturbs every pixel by N(0, (sigma * max)^2), rounded and clamped.
/// Draws one normal per pixel in row-major order.
inline GrayImage add_gaussian_noise(const GrayImage& img, double sigma, Rng& rng)
{
    detail::require(sigma >= 0.0, "noise sigma must be non-negative");
    GrayImage out = img;
    if (sigma == 0.0)
        return out;
    const auto top = img.max_value();
    const double scale = sigma * top;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = quantize(img[i] + scale * rng.normal(), top);
    return out;
}

/// Image built from a fixed pore layout: pore pixels dark, the rest bright,
/// then noise.
inline GrayImage render_fixture(const BinaryMask& mask, int bit_depth, double noise_sigma, Rng& rng)
{
    GrayImage img(mask.width(), mask.height(), bit_depth, matrix_intensity(bit_depth));
    const auto pore = pore_intensity(bit_depth);
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i])
            img[i] = pore;
    return add_gaussian_noise(img, noise_sigma, rng);
}

/// Random fixture. Disk draws per pore, in order: cx, cy, radius
/// (uniform integers); then the noise field.
inline Fixture synth_fixture(const FixtureParams& p, Rng& rng)
{
    detail::require(p.width >= 1 && p.height >= 1, "fixture dimensions must be >= 1");
    const auto half = static_cast<double>(std::min(p.width, p.height)) / 2.0;
    if (!(p.min_radius > 0 && p.min_radius <= p.max_radius && static_cast<double>(p.max_radius) < half))
        throw InvalidArgument("invalid radius range");
    detail::require(p.noise_sigma >= 0.0, "noise sigma must be non-negative");

    Fixture fx;
    fx.disks.reserve(p.n_pores);
    const auto span = static_cast<std::uint64_t>(p.max_radius - p.min_radius + 1);
    for (std::size_t i = 0; i < p.n_pores; ++i) {
        Disk d;
        d.cx = static_cast<std::int64_t>(rng.uniform_int(p.width));
        d.cy = static_cast<std::int64_t>(rng.uniform_int(p.height));
        d.radius = p.min_radius + static_cast<std::int64_t>(rng.uniform_int(span));
        fx.disks.push_back(d);
    }
    fx.mask = rasterize_disks(p.width, p.height, fx.disks);
    fx.image = render_fixture(fx.mask, p.bit_depth, p.noise_sigma, rng);
    return fx;
}

} // namespace rockseg
