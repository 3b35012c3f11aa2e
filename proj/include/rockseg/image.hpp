#pragma once

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rockseg {

/// Dense row-major 2-D grid. The common storage behind every image type.
template <class T>
class Grid {
public:
    using value_type = T;

    Grid() = default;

    Grid(std::size_t width, std::size_t height, T fill = T{})
        : width_(width), height_(height), data_(width * height, fill)
    {
        detail::require(width >= 1 && height >= 1, "grid dimensions must be >= 1");
    }

    Grid(std::size_t width, std::size_t height, std::vector<T> data)
        : width_(width), height_(height), data_(std::move(data))
    {
        detail::require(width >= 1 && height >= 1, "grid dimensions must be >= 1");
        detail::require(data_.size() == width * height,
                        "grid data length must equal width * height");
    }

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }

    T& operator()(std::size_t x, std::size_t y) { return data_[y * width_ + x]; }
    const T& operator()(std::size_t x, std::size_t y) const { return data_[y * width_ + x]; }

    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }

    std::span<T> values() noexcept { return data_; }
    std::span<const T> values() const noexcept { return data_; }

    bool same_shape(const auto& other) const noexcept
    {
        return width_ == other.width() && height_ == other.height();
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<T> data_;
};

/// Integer intensity image with 8- or 16-bit depth.
class GrayImage : public Grid<std::uint16_t> {
public:
    GrayImage() = default;

    GrayImage(std::size_t width, std::size_t height, int bit_depth, std::uint16_t fill = 0)
        : Grid(width, height, fill), bit_depth_(bit_depth)
    {
        validate();
    }

    GrayImage(std::size_t width, std::size_t height, int bit_depth, std::vector<std::uint16_t> data)
        : Grid(width, height, std::move(data)), bit_depth_(bit_depth)
    {
        validate();
    }

    int bit_depth() const noexcept { return bit_depth_; }
    std::uint16_t max_value() const noexcept { return max_for_depth(bit_depth_); }

    static std::uint16_t max_for_depth(int bit_depth) noexcept
    {
        return bit_depth == 8 ? 255 : 65535;
    }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    void validate() const
    {
        detail::require(bit_depth_ == 8 || bit_depth_ == 16, "bit depth must be 8 or 16");
        const auto top = max_value();
        for (auto v : values())
            detail::require(v <= top, "pixel value exceeds bit-depth range");
    }

    int bit_depth_ = 8;
};

/// Pore/matrix mask. Nonzero = pore.
using BinaryMask = Grid<std::uint8_t>;

/// Per-pixel class labels in [0, num_labels).
class LabelMap : public Grid<std::uint32_t> {
public:
    LabelMap() = default;

    LabelMap(std::size_t width, std::size_t height, std::uint32_t num_labels)
        : Grid(width, height, 0u), num_labels_(num_labels)
    {
    }

    LabelMap(std::size_t width, std::size_t height, std::uint32_t num_labels,
             std::vector<std::uint32_t> data)
        : Grid(width, height, std::move(data)), num_labels_(num_labels)
    {
        for (auto v : values())
            detail::require(v < num_labels_, "label exceeds num_labels");
    }

    std::uint32_t num_labels() const noexcept { return num_labels_; }
    void set_num_labels(std::uint32_t n) noexcept { num_labels_ = n; }

    friend bool operator==(const LabelMap&, const LabelMap&) = default;

private:
    std::uint32_t num_labels_ = 0;
};

/// Multi-channel real field. Storage is channel-major: each channel is a
/// contiguous row-major plane, so element (x, y, c) lives at
/// c * width * height + y * width + x.
class RealField {
public:
    RealField() = default;

    RealField(std::size_t width, std::size_t height, std::size_t channels = 1, double fill = 0.0)
        : width_(width), height_(height), channels_(channels),
          data_(width * height * channels, fill)
    {
        detail::require(width >= 1 && height >= 1 && channels >= 1,
                        "field dimensions must be >= 1");
    }

    RealField(std::size_t width, std::size_t height, std::size_t channels, std::vector<double> data)
        : width_(width), height_(height), channels_(channels), data_(std::move(data))
    {
        detail::require(width >= 1 && height >= 1 && channels >= 1,
                        "field dimensions must be >= 1");
        detail::require(data_.size() == width * height * channels,
                        "field data length must equal width * height * channels");
    }

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t channels() const noexcept { return channels_; }
    std::size_t plane_size() const noexcept { return width_ * height_; }
    std::size_t size() const noexcept { return data_.size(); }

    double& operator()(std::size_t x, std::size_t y, std::size_t c = 0)
    {
        return data_[c * plane_size() + y * width_ + x];
    }
    double operator()(std::size_t x, std::size_t y, std::size_t c = 0) const
    {
        return data_[c * plane_size() + y * width_ + x];
    }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    std::span<double> values() noexcept { return data_; }
    std::span<const double> values() const noexcept { return data_; }

    std::span<double> channel(std::size_t c)
    {
        return std::span<double>(data_).subspan(c * plane_size(), plane_size());
    }
    std::span<const double> channel(std::size_t c) const
    {
        return std::span<const double>(data_).subspan(c * plane_size(), plane_size());
    }

    bool same_shape(const RealField& o) const noexcept
    {
        return width_ == o.width_ && height_ == o.height_ && channels_ == o.channels_;
    }

    bool all_finite() const noexcept
    {
        return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
    }

    friend bool operator==(const RealField&, const RealField&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::size_t channels_ = 0;
    std::vector<double> data_;
};

inline void require_same_shape(const auto& a, const auto& b, const char* what)
{
    if (!(a.width() == b.width() && a.height() == b.height()))
        throw InvalidArgument(std::string(what) + ": dimension mismatch");
}

/// Quantize a real intensity: round half away from zero, clamp to [0, max].
inline std::uint16_t quantize(double v, std::uint16_t max_value) noexcept
{
    const double r = std::round(v);
    if (!(r > 0.0))
        return 0;
    if (r >= max_value)
        return max_value;
    return static_cast<std::uint16_t>(r);
}

} // namespace rockseg
