#pragma once

// Classical intensity segmenters: Otsu, 1-D k-means, 1-D Gaussian mixture
// via EM, and marker-based watershed. Clustering runs on the intensity
// histogram, so cost is O(bins * k * iterations) regardless of image size.

#include "error.hpp"
#include "image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <queue>
#include <tuple>
#include <vector>

namespace rockseg {

struct Histogram {
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;

    std::size_t bins() const noexcept { return counts.size(); }

    std::size_t distinct() const noexcept
    {
        return static_cast<std::size_t>(
            std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }));
    }
};

inline Histogram histogram(const GrayImage& img)
{
    Histogram h;
    h.counts.assign(static_cast<std::size_t>(img.max_value()) + 1, 0);
    for (auto v : img.values())
        ++h.counts[v];
    h.total = img.size();
    return h;
}

/// Smallest intensity v whose cumulative count reaches q * total.
inline std::uint16_t intensity_quantile(const Histogram& h, double q)
{
    const double target = q * static_cast<double>(h.total);
    std::uint64_t cum = 0;
    for (std::size_t v = 0; v < h.bins(); ++v) {
        cum += h.counts[v];
        if (h.counts[v] > 0 && static_cast<double>(cum) >= target)
            return static_cast<std::uint16_t>(v);
    }
    return static_cast<std::uint16_t>(h.bins() - 1);
}

// ---------------------------------------------------------------------------
// Otsu

/// Threshold t maximizing between-class variance, with class 0 = {v <= t}.
/// Scores use exact integer class sums; ties keep the smallest t.
inline std::uint16_t otsu_threshold(const Histogram& h)
{
    if (h.distinct() < 2)
        throw DegenerateInput("degenerate histogram");
    __int128 sum_all = 0;
    for (std::size_t v = 0; v < h.bins(); ++v)
        sum_all += static_cast<__int128>(h.counts[v]) * v;

    std::uint64_t n0 = 0;
    __int128 s0 = 0;
    long double best = -1.0L;
    std::uint16_t best_t = 0;
    for (std::size_t t = 0; t + 1 < h.bins(); ++t) {
        n0 += h.counts[t];
        s0 += static_cast<__int128>(h.counts[t]) * t;
        const std::uint64_t n1 = h.total - n0;
        if (n0 == 0 || n1 == 0)
            continue;
        const __int128 s1 = sum_all - s0;
        // N^2 * sigma_B^2 = (s0 * n1 - s1 * n0)^2 / (n0 * n1)
        const auto d = static_cast<long double>(s0 * static_cast<__int128>(n1) -
                                                s1 * static_cast<__int128>(n0));
        const long double score = d * d / (static_cast<long double>(n0) * static_cast<long double>(n1));
        if (score > best) {
            best = score;
            best_t = static_cast<std::uint16_t>(t);
        }
    }
    return best_t;
}

inline std::uint16_t otsu_threshold(const GrayImage& img)
{
    return otsu_threshold(histogram(img));
}

/// pore_is_dark: pore where pixel <= threshold; otherwise pore where pixel > threshold.
inline BinaryMask binarize(const GrayImage& img, std::uint32_t threshold, bool pore_is_dark = true)
{
    BinaryMask mask(img.width(), img.height());
    for (std::size_t i = 0; i < img.size(); ++i)
        mask[i] = (img[i] <= threshold) == pore_is_dark;
    return mask;
}

// ---------------------------------------------------------------------------
// k-means

struct KMeansResult {
    LabelMap labels;
    std::vector<double> centroids; // ascending
    std::vector<double> objective_trace;
    int iterations = 0;
    bool converged = false;
};

namespace detail {

struct WeightedBins {
    std::vector<double> value;
    std::vector<double> weight;
};

inline WeightedBins occupied_bins(const Histogram& h)
{
    WeightedBins b;
    for (std::size_t v = 0; v < h.bins(); ++v)
        if (h.counts[v] > 0) {
            b.value.push_back(static_cast<double>(v));
            b.weight.push_back(static_cast<double>(h.counts[v]));
        }
    return b;
}

inline std::size_t nearest(const std::vector<double>& centroids, double v)
{
    std::size_t best = 0;
    double best_d = std::abs(v - centroids[0]);
    for (std::size_t j = 1; j < centroids.size(); ++j) {
        const double d = std::abs(v - centroids[j]);
        if (d < best_d) {
            best_d = d;
            best = j;
        }
    }
    return best;
}

// Centroid i at the (i + 0.5) / k pixel quantile. If two quantiles land on
// the same intensity, fall back to the same quantiles over the distinct
// intensities, which are guaranteed distinct when k <= distinct count.
inline std::vector<double> quantile_init(const Histogram& h, const WeightedBins& bins, std::size_t k)
{
    std::vector<double> c(k);
    for (std::size_t i = 0; i < k; ++i)
        c[i] = intensity_quantile(h, (static_cast<double>(i) + 0.5) / static_cast<double>(k));
    if (std::adjacent_find(c.begin(), c.end()) == c.end())
        return c;
    const auto d = bins.value.size();
    for (std::size_t i = 0; i < k; ++i) {
        const auto idx = static_cast<std::size_t>((static_cast<double>(i) + 0.5) *
                                                  static_cast<double>(d) / static_cast<double>(k));
        c[i] = bins.value[std::min(idx, d - 1)];
    }
    return c;
}

inline LabelMap label_by_bins(const GrayImage& img, const std::vector<std::uint32_t>& bin_label,
                              std::uint32_t num_labels)
{
    LabelMap labels(img.width(), img.height(), num_labels);
    for (std::size_t i = 0; i < img.size(); ++i)
        labels[i] = bin_label[img[i]];
    return labels;
}

} // namespace detail

/// Lloyd's algorithm on the intensity histogram. Stops when the largest
/// centroid move drops below tol, or after max_iter iterations. Empty
/// clusters keep their centroid.
inline KMeansResult kmeans_intensity(const GrayImage& img, std::size_t k, int max_iter = 100, double tol = 1e-6)
{
    detail::require(k >= 1, "k must be >= 1");
    detail::require(max_iter >= 1, "max_iter must be >= 1");
    const auto h = histogram(img);
    if (h.distinct() < k)
        throw DegenerateInput("k exceeds the number of distinct intensities");
    const auto bins = detail::occupied_bins(h);

    KMeansResult res;
    auto& c = res.centroids;
    c = detail::quantile_init(h, bins, k);
    std::vector<std::size_t> assign(bins.value.size());

    while (res.iterations < max_iter) {
        double objective = 0.0;
        std::vector<double> num(k, 0.0), den(k, 0.0);
        for (std::size_t b = 0; b < bins.value.size(); ++b) {
            const auto j = detail::nearest(c, bins.value[b]);
            assign[b] = j;
            const double d = bins.value[b] - c[j];
            objective += bins.weight[b] * d * d;
            num[j] += bins.weight[b] * bins.value[b];
            den[j] += bins.weight[b];
        }
        res.objective_trace.push_back(objective);
        ++res.iterations;
        double move = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            if (den[j] == 0.0)
                continue;
            const double next = num[j] / den[j];
            move = std::max(move, std::abs(next - c[j]));
            c[j] = next;
        }
        if (move < tol) {
            res.converged = true;
            break;
        }
    }

    std::sort(c.begin(), c.end());
    std::vector<std::uint32_t> bin_label(h.bins(), 0);
    for (std::size_t b = 0; b < bins.value.size(); ++b)
        bin_label[static_cast<std::size_t>(bins.value[b])] =
            static_cast<std::uint32_t>(detail::nearest(c, bins.value[b]));
    res.labels = detail::label_by_bins(img, bin_label, static_cast<std::uint32_t>(k));
    return res;
}

// ---------------------------------------------------------------------------
// Gaussian mixture

struct GmmParams {
    std::vector<double> weights;
    std::vector<double> means;
    std::vector<double> variances;

    std::size_t k() const noexcept { return means.size(); }
};

struct GmmResult {
    GmmParams params;
    LabelMap labels;
    std::vector<double> loglik_trace;
    int iterations = 0;
    bool converged = false;
};

/// (1e-4 * dynamic range)^2
inline double gmm_variance_floor(int bit_depth)
{
    const double r = 1e-4 * GrayImage::max_for_depth(bit_depth);
    return r * r;
}

namespace detail {

inline double log_normal_pdf(double v, double mean, double var)
{
    const double d = v - mean;
    return -0.5 * std::log(2.0 * std::numbers::pi * var) - d * d / (2.0 * var);
}

// log(w_j) + log N(v | mean_j, var_j) for every component.
inline void component_log_terms(const GmmParams& p, double v, std::vector<double>& out)
{
    out.resize(p.k());
    for (std::size_t j = 0; j < p.k(); ++j)
        out[j] = p.weights[j] > 0.0 ? std::log(p.weights[j]) + log_normal_pdf(v, p.means[j], p.variances[j])
                                    : -std::numeric_limits<double>::infinity();
}

inline double log_sum_exp(const std::vector<double>& terms)
{
    const double m = *std::max_element(terms.begin(), terms.end());
    if (!std::isfinite(m))
        return m;
    double s = 0.0;
    for (double t : terms)
        s += std::exp(t - m);
    return m + std::log(s);
}

} // namespace detail

/// Histogram-weighted log-likelihood of the image intensities under p.
inline double gmm_log_likelihood(const Histogram& h, const GmmParams& p)
{
    std::vector<double> terms;
    double ll = 0.0;
    for (std::size_t v = 0; v < h.bins(); ++v) {
        if (h.counts[v] == 0)
            continue;
        detail::component_log_terms(p, static_cast<double>(v), terms);
        ll += static_cast<double>(h.counts[v]) * detail::log_sum_exp(terms);
    }
    return ll;
}

/// EM for a 1-D mixture, initialized from kmeans_intensity. The trace holds
/// the log-likelihood of the initial parameters and after every M-step;
/// iteration stops once the gain falls below tol. Components are returned
/// sorted by mean; labels are the argmax of the responsibilities.
inline GmmResult gmm_em(const GrayImage& img, std::size_t k, int max_iter = 200, double tol = 1e-8)
{
    detail::require(k >= 1, "k must be >= 1");
    detail::require(max_iter >= 1, "max_iter must be >= 1");
    const auto h = histogram(img);
    if (h.distinct() < k)
        throw DegenerateInput("k exceeds the number of distinct intensities");
    const double floor = gmm_variance_floor(img.bit_depth());
    const auto bins = detail::occupied_bins(h);
    const double total = static_cast<double>(h.total);

    GmmResult res;
    auto& p = res.params;
    {
        const auto km = kmeans_intensity(img, k);
        p.means = km.centroids;
        p.weights.assign(k, 0.0);
        p.variances.assign(k, 0.0);
        std::vector<double> mass(k, 0.0);
        for (std::size_t b = 0; b < bins.value.size(); ++b) {
            const auto j = detail::nearest(p.means, bins.value[b]);
            const double d = bins.value[b] - p.means[j];
            mass[j] += bins.weight[b];
            p.variances[j] += bins.weight[b] * d * d;
        }
        for (std::size_t j = 0; j < k; ++j) {
            p.weights[j] = mass[j] / total;
            p.variances[j] = std::max(floor, mass[j] > 0.0 ? p.variances[j] / mass[j] : floor);
        }
    }

    std::vector<double> terms;
    std::vector<std::vector<double>> resp(bins.value.size(), std::vector<double>(k));
    auto e_step = [&]() {
        double ll = 0.0;
        for (std::size_t b = 0; b < bins.value.size(); ++b) {
            detail::component_log_terms(p, bins.value[b], terms);
            const double lse = detail::log_sum_exp(terms);
            ll += bins.weight[b] * lse;
            for (std::size_t j = 0; j < k; ++j)
                resp[b][j] = std::exp(terms[j] - lse);
        }
        return ll;
    };

    res.loglik_trace.push_back(e_step());
    while (res.iterations < max_iter) {
        for (std::size_t j = 0; j < k; ++j) {
            double nj = 0.0, sum = 0.0;
            for (std::size_t b = 0; b < bins.value.size(); ++b) {
                const double r = bins.weight[b] * resp[b][j];
                nj += r;
                sum += r * bins.value[b];
            }
            p.weights[j] = nj / total;
            if (nj <= 0.0)
                continue;
            const double mean = sum / nj;
            double sq = 0.0;
            for (std::size_t b = 0; b < bins.value.size(); ++b) {
                const double d = bins.value[b] - mean;
                sq += bins.weight[b] * resp[b][j] * d * d;
            }
            p.means[j] = mean;
            p.variances[j] = std::max(floor, sq / nj);
        }
        ++res.iterations;
        const double ll = e_step();
        const double gain = ll - res.loglik_trace.back();
        res.loglik_trace.push_back(ll);
        if (gain < tol) {
            res.converged = true;
            break;
        }
    }

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return p.means[a] < p.means[b]; });
    GmmParams sorted;
    for (auto j : order) {
        sorted.weights.push_back(p.weights[j]);
        sorted.means.push_back(p.means[j]);
        sorted.variances.push_back(p.variances[j]);
    }
    p = std::move(sorted);

    std::vector<std::uint32_t> bin_label(h.bins(), 0);
    for (double v : bins.value) {
        detail::component_log_terms(p, v, terms);
        bin_label[static_cast<std::size_t>(v)] =
            static_cast<std::uint32_t>(std::max_element(terms.begin(), terms.end()) - terms.begin());
    }
    res.labels = detail::label_by_bins(img, bin_label, static_cast<std::uint32_t>(k));
    return res;
}

// ---------------------------------------------------------------------------
// Watershed

inline constexpr std::uint32_t kUnknownMarker = 0;
inline constexpr std::uint32_t kPoreMarker = 1;
inline constexpr std::uint32_t kMatrixMarker = 2;

/// Seeds: 1 where intensity <= low quantile (pores), 2 where intensity >=
/// high quantile (matrix), 0 elsewhere.
inline LabelMap generate_markers(const GrayImage& img, double low_quantile, double high_quantile)
{
    if (!(0.0 < low_quantile && low_quantile < high_quantile && high_quantile < 1.0))
        throw InvalidArgument("marker quantiles must satisfy 0 < low < high < 1");
    const auto h = histogram(img);
    const auto lo = intensity_quantile(h, low_quantile);
    const auto hi = intensity_quantile(h, high_quantile);
    if (lo >= hi)
        throw DegenerateInput("marker quantiles coincide; pixels would be seeded both ways");
    LabelMap markers(img.width(), img.height(), 3);
    for (std::size_t i = 0; i < img.size(); ++i) {
        if (img[i] <= lo)
            markers[i] = kPoreMarker;
        else if (img[i] >= hi)
            markers[i] = kMatrixMarker;
    }
    return markers;
}

/// Priority flood from the markers over the raw intensity topography.
/// Marked pixels enter the queue in row-major order; the queue is keyed by
/// (intensity, insertion sequence). A popped pixel labels its unlabeled
/// 4-neighbors (north, west, east, south) and enqueues them.
inline LabelMap watershed(const GrayImage& topography, const LabelMap& markers)
{
    require_same_shape(topography, markers, "watershed");
    const auto W = topography.width(), H = topography.height();
    LabelMap labels = markers;

    using Entry = std::tuple<std::uint16_t, std::uint64_t, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    std::uint64_t seq = 0;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] != 0)
            queue.emplace(topography[i], seq++, i);
    if (queue.empty())
        throw InvalidArgument("watershed needs at least one nonzero marker");

    while (!queue.empty()) {
        const auto [level, s, i] = queue.top();
        queue.pop();
        const std::size_t x = i % W, y = i / W;
        auto visit = [&](std::size_t n) {
            if (labels[n] == 0) {
                labels[n] = labels[i];
                queue.emplace(topography[n], seq++, n);
            }
        };
        if (y > 0)
            visit(i - W);
        if (x > 0)
            visit(i - 1);
        if (x + 1 < W)
            visit(i + 1);
        if (y + 1 < H)
            visit(i + W);
    }
    return labels;
}

} // namespace rockseg
