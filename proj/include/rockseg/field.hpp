#pragma once

#include "error.hpp"
#include "image.hpp"

namespace rockseg {

/// Maps intensities linearly onto [-1, 1]: 0 -> -1, max -> +1.
inline RealField to_field(const GrayImage& img)
{
    RealField field(img.width(), img.height(), 1);
    const double top = img.max_value();
    for (std::size_t i = 0; i < img.size(); ++i)
        field[i] = 2.0 * img[i] / top - 1.0;
    return field;
}

/// Inverse of to_field. Values are clamped to [-1, 1] before quantization.
inline GrayImage from_field(const RealField& field, int bit_depth = 8)
{
    detail::require(field.channels() == 1, "from_field expects a single-channel field");
    detail::require(bit_depth == 8 || bit_depth == 16, "bit depth must be 8 or 16");
    GrayImage img(field.width(), field.height(), bit_depth);
    const auto top = img.max_value();
    for (std::size_t i = 0; i < img.size(); ++i) {
        const double v = std::clamp(field[i], -1.0, 1.0);
        img[i] = quantize((v + 1.0) * 0.5 * top, top);
    }
    return img;
}

} // namespace rockseg
