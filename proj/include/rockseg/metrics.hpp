#pragma once

// Binary segmentation scores (pore = positive class), the soft IoU loss and
// a numerically stable BCE-with-logits.

#include "error.hpp"
#include "image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace rockseg {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tn = 0;

    std::uint64_t total() const noexcept { return tp + fp + fn + tn; }

    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// A ratio whose denominator may vanish. When it does, value holds the
/// documented fallback and degenerate is set.
struct Score {
    double value = 0.0;
    bool degenerate = false;
};

inline ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& truth)
{
    require_same_shape(pred, truth, "confusion");
    ConfusionCounts c;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const bool p = pred[i] != 0, t = truth[i] != 0;
        if (p && t)
            ++c.tp;
        else if (p)
            ++c.fp;
        else if (t)
            ++c.fn;
        else
            ++c.tn;
    }
    return c;
}

namespace detail {

inline Score ratio(std::uint64_t num, std::uint64_t den, double fallback)
{
    if (den == 0)
        return {fallback, true};
    return {static_cast<double>(num) / static_cast<double>(den), false};
}

} // namespace detail

inline Score precision(const ConfusionCounts& c) { return detail::ratio(c.tp, c.tp + c.fp, 0.0); }
inline Score recall(const ConfusionCounts& c) { return detail::ratio(c.tp, c.tp + c.fn, 0.0); }
inline Score accuracy(const ConfusionCounts& c) { return detail::ratio(c.tp + c.tn, c.total(), 0.0); }

/// Harmonic mean of precision and recall; 0 (degenerate) when either is
/// degenerate or both are zero.
inline Score f1(const ConfusionCounts& c)
{
    const auto p = precision(c), r = recall(c);
    if (p.degenerate || r.degenerate || p.value + r.value == 0.0)
        return {0.0, true};
    return {2.0 * p.value * r.value / (p.value + r.value), false};
}

/// tp / (tp + fp + fn); 1 (degenerate) when neither mask has pores.
inline Score jaccard(const ConfusionCounts& c) { return detail::ratio(c.tp, c.tp + c.fp + c.fn, 1.0); }

inline Score jaccard(const BinaryMask& pred, const BinaryMask& truth)
{
    return jaccard(confusion(pred, truth));
}

/// Per-pixel class probabilities, channel-major planes like RealField.
class SoftPrediction {
public:
    SoftPrediction() = default;

    SoftPrediction(std::size_t width, std::size_t height, std::size_t classes, std::vector<double> data)
        : width_(width), height_(height), classes_(classes), data_(std::move(data))
    {
        detail::require(width >= 1 && height >= 1 && classes >= 1, "soft prediction dimensions must be >= 1");
        detail::require(data_.size() == width * height * classes,
                        "soft prediction data length must equal width * height * classes");
        for (double v : data_)
            detail::require(v >= 0.0 && v <= 1.0, "soft prediction values must lie in [0, 1]");
    }

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t classes() const noexcept { return classes_; }
    std::size_t pixels() const noexcept { return width_ * height_; }

    double operator()(std::size_t pixel, std::size_t cls) const { return data_[cls * pixels() + pixel]; }
    std::span<const double> values() const noexcept { return data_; }

    /// C = 1: the pore probability. C = 2: class 0 matrix, class 1 pore.
    static SoftPrediction one_hot(const BinaryMask& mask, std::size_t classes)
    {
        detail::require(classes == 1 || classes == 2, "one-hot masks support 1 or 2 classes");
        const auto n = mask.size();
        std::vector<double> d(n * classes);
        for (std::size_t i = 0; i < n; ++i) {
            const double pore = mask[i] ? 1.0 : 0.0;
            if (classes == 1) {
                d[i] = pore;
            } else {
                d[i] = 1.0 - pore;
                d[n + i] = pore;
            }
        }
        return {mask.width(), mask.height(), classes, std::move(d)};
    }

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::size_t classes_ = 0;
    std::vector<double> data_;
};

/// L = 1 - sum_c sum_i g s / sum_c sum_i (g + s - g s). One global ratio,
/// not an average of per-class ratios.
inline double iou_loss(const SoftPrediction& pred, const SoftPrediction& truth)
{
    if (pred.width() != truth.width() || pred.height() != truth.height() || pred.classes() != truth.classes())
        throw InvalidArgument("iou_loss: shape mismatch");
    for (double g : truth.values())
        detail::require(g == 0.0 || g == 1.0, "iou_loss: ground truth must be one-hot");
    double inter = 0.0, uni = 0.0;
    for (std::size_t c = 0; c < pred.classes(); ++c)
        for (std::size_t i = 0; i < pred.pixels(); ++i) {
            const double g = truth(i, c), s = pred(i, c);
            inter += g * s;
            uni += g + s - g * s;
        }
    if (uni == 0.0)
        throw DegenerateInput("iou_loss: union is empty");
    return 1.0 - inter / uni;
}

/// Mean of max(x, 0) - x y + log(1 + exp(-|x|)).
inline double bce_with_logits(std::span<const double> logits, std::span<const double> targets)
{
    if (logits.size() != targets.size())
        throw InvalidArgument("bce_with_logits: shape mismatch");
    detail::require(!logits.empty(), "bce_with_logits: empty input");
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        const double x = logits[i], y = targets[i];
        if (!(y >= 0.0 && y <= 1.0))
            throw InvalidArgument("bce_with_logits: target outside [0, 1]");
        sum += std::max(x, 0.0) - x * y + std::log1p(std::exp(-std::abs(x)));
    }
    return sum / static_cast<double>(logits.size());
}

inline double bce_with_logits(const RealField& logits, const RealField& targets)
{
    if (!logits.same_shape(targets))
        throw InvalidArgument("bce_with_logits: shape mismatch");
    return bce_with_logits(logits.values(), targets.values());
}

} // namespace rockseg
