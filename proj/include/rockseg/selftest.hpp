#pragma once

// Built-in analytic checks run by `rockseg selftest`.

#include "diffusion.hpp"
#include "rng.hpp"
#include "segment.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace rockseg {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// recover_x0(forward_jump(x0, t, eps), t, eps) == x0 to 1e-10 relative.
inline CheckResult check_inversion_identity(std::uint64_t seed, int trials = 100)
{
    Rng rng(seed);
    const auto sched = make_linear_schedule(200);
    double worst = 0.0;
    for (int k = 0; k < trials; ++k) {
        const int t = 1 + static_cast<int>(rng.uniform_int(200));
        RealField x0(16, 16);
        for (auto& v : x0.values())
            v = 2.0 * rng.uniform() - 1.0;
        const auto eps = standard_normal_like(x0, rng);
        const auto back = recover_x0(forward_jump(x0, t, sched, eps).x_t, t, eps, sched);
        for (std::size_t i = 0; i < x0.size(); ++i)
            worst = std::max(worst, std::abs(back[i] - x0[i]) / std::max(1.0, std::abs(x0[i])));
    }
    return {"inversion_identity", worst <= 1e-10, "max relative error " + std::to_string(worst)};
}

/// Variance of sqrt(a_t - a_t a_{t-1}) Z1 + sqrt(1 - a_t) Z2 against
/// 1 - a_t a_{t-1}, within 3 standard errors.
inline CheckResult check_gaussian_merge(std::uint64_t seed, int draws = 100000)
{
    Rng rng(seed);
    const auto sched = make_linear_schedule(1000);
    bool ok = true;
    std::string detail;
    for (int k = 0; k < 3; ++k) {
        const int t = 2 + static_cast<int>(rng.uniform_int(999));
        const double at = sched.alpha(t), ap = sched.alpha(t - 1);
        const double c1 = std::sqrt(at - at * ap), c2 = std::sqrt(1.0 - at);
        double sum = 0.0, sq = 0.0;
        for (int i = 0; i < draws; ++i) {
            const double v = c1 * rng.normal() + c2 * rng.normal();
            sum += v;
            sq += v * v;
        }
        const double n = draws;
        const double mean = sum / n;
        const double var = (sq - n * mean * mean) / (n - 1.0);
        const double expected = 1.0 - at * ap;
        const double se = expected * std::sqrt(2.0 / (n - 1.0));
        if (std::abs(var - expected) > 3.0 * se) {
            ok = false;
            detail += "t=" + std::to_string(t) + " off by " + std::to_string((var - expected) / se) + " SE; ";
        }
    }
    return {"gaussian_merge", ok, ok ? "within 3 standard errors" : detail};
}

/// otsu_threshold against an exhaustive scan that recomputes both class
/// statistics from scratch for every candidate threshold.
inline CheckResult check_otsu_bruteforce(std::uint64_t seed, int trials = 50)
{
    Rng rng(seed);
    for (int k = 0; k < trials; ++k) {
        Histogram h;
        h.counts.assign(256, 0);
        const auto occupied = 2 + rng.uniform_int(20);
        for (std::uint64_t j = 0; j < occupied; ++j)
            h.counts[rng.uniform_int(256)] += 1 + rng.uniform_int(50);
        for (auto c : h.counts)
            h.total += c;
        if (h.distinct() < 2)
            continue;
        long double best = -1.0L;
        std::size_t best_t = 0;
        for (std::size_t t = 0; t + 1 < 256; ++t) {
            long double n0 = 0, s0 = 0, n1 = 0, s1 = 0;
            for (std::size_t v = 0; v < 256; ++v) {
                if (v <= t) {
                    n0 += h.counts[v];
                    s0 += static_cast<long double>(h.counts[v]) * v;
                } else {
                    n1 += h.counts[v];
                    s1 += static_cast<long double>(h.counts[v]) * v;
                }
            }
            if (n0 == 0 || n1 == 0)
                continue;
            const long double d = s0 * n1 - s1 * n0;
            const long double score = d * d / (n0 * n1);
            if (score > best) {
                best = score;
                best_t = t;
            }
        }
        const auto got = otsu_threshold(h);
        if (got != best_t)
            return {"otsu_bruteforce", false,
                    "trial " + std::to_string(k) + ": got " + std::to_string(got) + ", expected " +
                        std::to_string(best_t)};
    }
    return {"otsu_bruteforce", true, "matches exhaustive search"};
}

inline std::vector<CheckResult> run_selftest(std::uint64_t seed = 20240601)
{
    return {check_inversion_identity(seed), check_gaussian_merge(seed + 1), check_otsu_bruteforce(seed + 2)};
}

} // namespace rockseg
