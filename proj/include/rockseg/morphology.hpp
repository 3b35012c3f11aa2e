#pragma once

// Pore-scale measurements on binary masks: porosity, 4-connected
// components, second-moment aspect ratios and box-counting dimension.

#include "error.hpp"
#include "image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

namespace rockseg {

/// Union-find with path halving and union by size.
class DisjointSet {
public:
    explicit DisjointSet(std::size_t n = 0) : parent_(n), size_(n, 1)
    {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t add()
    {
        parent_.push_back(parent_.size());
        size_.push_back(1);
        return parent_.size() - 1;
    }

    std::size_t find(std::size_t x)
    {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    std::size_t unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a == b)
            return a;
        if (size_[a] < size_[b])
            std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        return a;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
};

/// 4-connected pore components labeled 1..K in order of first (row-major)
/// encounter; matrix pixels are 0. num_labels() is K + 1.
inline LabelMap label_components(const BinaryMask& mask)
{
    const auto W = mask.width(), H = mask.height();
    std::vector<std::size_t> provisional(mask.size(), 0);
    DisjointSet sets(1); // slot 0 is background

    for (std::size_t y = 0; y < H; ++y)
        for (std::size_t x = 0; x < W; ++x) {
            const auto i = y * W + x;
            if (!mask[i])
                continue;
            const std::size_t up = (y > 0 && mask[i - W]) ? provisional[i - W] : 0;
            const std::size_t left = (x > 0 && mask[i - 1]) ? provisional[i - 1] : 0;
            if (up && left) {
                provisional[i] = up;
                sets.unite(up, left);
            } else if (up || left) {
                provisional[i] = up ? up : left;
            } else {
                provisional[i] = sets.add();
            }
        }

    // Second pass: compact roots to 1..K in row-major first-encounter order.
    std::vector<std::uint32_t> final_label(provisional.size() + 1, 0);
    std::uint32_t next = 0;
    LabelMap labels(W, H, 1);
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (!provisional[i])
            continue;
        const auto root = sets.find(provisional[i]);
        if (final_label[root] == 0)
            final_label[root] = ++next;
        labels[i] = final_label[root];
    }
    labels.set_num_labels(next + 1);
    return labels;
}

inline std::size_t pore_count(const BinaryMask& mask)
{
    return static_cast<std::size_t>(std::count_if(mask.values().begin(), mask.values().end(),
                                                  [](auto v) { return v != 0; }));
}

inline double porosity(const BinaryMask& mask)
{
    return static_cast<double>(pore_count(mask)) / static_cast<double>(mask.size());
}

struct Connectivity {
    std::size_t component_count = 0;
    double largest_component_fraction = 0.0; // of pore pixels
};

inline std::vector<std::size_t> component_sizes(const LabelMap& labels)
{
    std::vector<std::size_t> sizes(labels.num_labels(), 0);
    for (auto l : labels.values())
        ++sizes[l];
    if (!sizes.empty())
        sizes[0] = 0;
    return sizes;
}

inline Connectivity connectivity(const BinaryMask& mask)
{
    const auto labels = label_components(mask);
    const auto sizes = component_sizes(labels);
    Connectivity c;
    c.component_count = labels.num_labels() - 1;
    const auto pores = pore_count(mask);
    if (pores > 0)
        c.largest_component_fraction =
            static_cast<double>(*std::max_element(sizes.begin(), sizes.end())) / static_cast<double>(pores);
    return c;
}

struct AspectRatios {
    std::vector<double> ratios; // per retained component, in label order
    std::optional<double> mean;
    std::size_t excluded_small_components = 0;
};

/// Second-moment ellipse of each component with at least min_pixels pixels.
/// Each axis variance gets +1/12 for the extent of a unit pixel;
/// ratio = sqrt(lambda_max / lambda_min).
inline AspectRatios aspect_ratios(const BinaryMask& mask, std::size_t min_pixels = 5)
{
    detail::require(min_pixels >= 1, "min_pixels must be >= 1");
    const auto labels = label_components(mask);
    const std::size_t K = labels.num_labels() - 1;
    std::vector<double> n(K + 1, 0.0), sx(K + 1, 0.0), sy(K + 1, 0.0);
    for (std::size_t y = 0; y < labels.height(); ++y)
        for (std::size_t x = 0; x < labels.width(); ++x) {
            const auto l = labels(x, y);
            if (!l)
                continue;
            n[l] += 1.0;
            sx[l] += static_cast<double>(x);
            sy[l] += static_cast<double>(y);
        }
    std::vector<double> cxx(K + 1, 0.0), cyy(K + 1, 0.0), cxy(K + 1, 0.0);
    for (std::size_t y = 0; y < labels.height(); ++y)
        for (std::size_t x = 0; x < labels.width(); ++x) {
            const auto l = labels(x, y);
            if (!l)
                continue;
            const double dx = static_cast<double>(x) - sx[l] / n[l];
            const double dy = static_cast<double>(y) - sy[l] / n[l];
            cxx[l] += dx * dx;
            cyy[l] += dy * dy;
            cxy[l] += dx * dy;
        }

    AspectRatios out;
    double sum = 0.0;
    for (std::size_t l = 1; l <= K; ++l) {
        if (n[l] < static_cast<double>(min_pixels)) {
            ++out.excluded_small_components;
            continue;
        }
        const double mu20 = cxx[l] / n[l] + 1.0 / 12.0;
        const double mu02 = cyy[l] / n[l] + 1.0 / 12.0;
        const double mu11 = cxy[l] / n[l];
        const double half_trace = 0.5 * (mu20 + mu02);
        const double disc = std::sqrt(0.25 * (mu20 - mu02) * (mu20 - mu02) + mu11 * mu11);
        const double lmax = half_trace + disc;
        const double lmin = half_trace - disc;
        const double r = std::sqrt(lmax / lmin);
        out.ratios.push_back(r);
        sum += r;
    }
    if (!out.ratios.empty())
        out.mean = sum / static_cast<double>(out.ratios.size());
    return out;
}

struct BoxCount {
    std::size_t size = 0;
    std::size_t occupied = 0;
};

struct FractalFit {
    double dimension = 0.0;
    double r2 = 0.0;
    std::vector<BoxCount> counts;
};

/// Powers of two from 1 up to min(W, H) / 4.
inline std::vector<std::size_t> default_box_sizes(std::size_t width, std::size_t height)
{
    std::vector<std::size_t> sizes;
    const auto limit = std::min(width, height) / 4;
    for (std::size_t s = 1; s <= limit; s *= 2)
        sizes.push_back(s);
    return sizes;
}

/// Number of s x s boxes (grid anchored at the origin, partial boxes at the
/// far edges included) containing at least one pore pixel.
inline std::size_t count_occupied_boxes(const BinaryMask& mask, std::size_t s)
{
    const auto bw = (mask.width() + s - 1) / s, bh = (mask.height() + s - 1) / s;
    std::vector<std::uint8_t> hit(bw * bh, 0);
    for (std::size_t y = 0; y < mask.height(); ++y)
        for (std::size_t x = 0; x < mask.width(); ++x)
            if (mask(x, y))
                hit[(y / s) * bw + x / s] = 1;
    return static_cast<std::size_t>(std::count(hit.begin(), hit.end(), std::uint8_t{1}));
}

/// Slope of the least-squares line through (log(1/s), log N(s)).
inline FractalFit fractal_dimension(const BinaryMask& mask, std::vector<std::size_t> sizes = {})
{
    if (pore_count(mask) == 0)
        throw DegenerateInput("fractal dimension of an empty mask");
    if (sizes.empty()) {
        if (std::min(mask.width(), mask.height()) < 8)
            throw DegenerateInput("mask too small for box counting (min side < 8)");
        sizes = default_box_sizes(mask.width(), mask.height());
    }
    detail::require(sizes.size() >= 2, "box counting needs at least two box sizes");
    for (auto s : sizes)
        detail::require(s >= 1, "box sizes must be >= 1");

    FractalFit fit;
    std::vector<double> xs, ys;
    for (auto s : sizes) {
        const auto n = count_occupied_boxes(mask, s);
        fit.counts.push_back({s, n});
        xs.push_back(-std::log(static_cast<double>(s)));
        ys.push_back(std::log(static_cast<double>(n)));
    }
    const double m = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / m;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    detail::require(sxx > 0.0, "box sizes must not all be equal");
    fit.dimension = sxy / sxx;
    fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

struct MorphReport {
    double porosity = 0.0;
    std::size_t component_count = 0;
    double largest_component_fraction = 0.0;
    std::optional<double> mean_aspect_ratio;
    std::optional<double> fractal_dimension;
    std::optional<double> fit_r2;
    std::size_t excluded_small_components = 0;

    friend bool operator==(const MorphReport&, const MorphReport&) = default;
};

/// Fractal fields stay empty when the mask has no pores or is too small.
inline MorphReport morph_report(const BinaryMask& mask, std::size_t min_pixels = 5)
{
    MorphReport r;
    r.porosity = porosity(mask);
    const auto c = connectivity(mask);
    r.component_count = c.component_count;
    r.largest_component_fraction = c.largest_component_fraction;
    const auto ar = aspect_ratios(mask, min_pixels);
    r.mean_aspect_ratio = ar.mean;
    r.excluded_small_components = ar.excluded_small_components;
    if (pore_count(mask) > 0 && std::min(mask.width(), mask.height()) >= 8) {
        const auto fd = fractal_dimension(mask);
        r.fractal_dimension = fd.dimension;
        r.fit_r2 = fd.r2;
    }
    return r;
}

} // namespace rockseg
