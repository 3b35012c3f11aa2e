#pragma once

// DDPM machinery: variance schedule, forward noising (single step and
// closed-form jump), clean-signal recovery, and ancestral reverse sampling
// behind a pluggable noise predictor.
//
// Indexing is 1-based: beta(t), alpha(t), alpha_bar(t) for t = 1..T, with
// alpha_bar(0) = 1 (empty product). Gaussian noise is drawn element by
// element in storage order (channel planes, each row-major).

#include "error.hpp"
#include "image.hpp"
#include "rng.hpp"

#include <cmath>
#include <concepts>
#include <string>
#include <vector>

namespace rockseg {

class VarianceSchedule {
public:
    VarianceSchedule() = default;

    /// betas[0] is beta_1. Must be strictly increasing inside (0, 1).
    explicit VarianceSchedule(std::vector<double> betas) : beta_(std::move(betas))
    {
        detail::require(!beta_.empty(), "schedule needs at least one step");
        for (std::size_t i = 0; i < beta_.size(); ++i) {
            detail::require(beta_[i] > 0.0 && beta_[i] < 1.0, "beta must lie in (0, 1)");
            if (i > 0)
                detail::require(beta_[i] > beta_[i - 1], "beta must be strictly increasing");
        }
        alpha_.resize(beta_.size());
        alpha_bar_.resize(beta_.size());
        double prod = 1.0;
        for (std::size_t i = 0; i < beta_.size(); ++i) {
            alpha_[i] = 1.0 - beta_[i];
            prod *= alpha_[i];
            alpha_bar_[i] = prod;
        }
    }

    int steps() const noexcept { return static_cast<int>(beta_.size()); }

    double beta(int t) const { return beta_.at(index(t)); }
    double alpha(int t) const { return alpha_.at(index(t)); }
    double alpha_bar(int t) const { return t == 0 ? 1.0 : alpha_bar_.at(index(t)); }

    const std::vector<double>& betas() const noexcept { return beta_; }

    void check_step(int t, int lowest = 1) const
    {
        if (t < lowest || t > steps())
            throw InvalidArgument("step index " + std::to_string(t) + " outside [" +
                                  std::to_string(lowest) + ", " + std::to_string(steps()) + "]");
    }

private:
    std::size_t index(int t) const
    {
        check_step(t);
        return static_cast<std::size_t>(t - 1);
    }

    std::vector<double> beta_;
    std::vector<double> alpha_;
    std::vector<double> alpha_bar_;
};

/// beta linearly interpolated from beta_start (t = 1) to beta_end (t = T).
inline VarianceSchedule make_linear_schedule(int T, double beta_start = 1e-4, double beta_end = 0.02)
{
    detail::require(T >= 1, "T must be >= 1");
    detail::require(0.0 < beta_start && beta_start < beta_end && beta_end < 1.0,
                    "schedule requires 0 < beta_start < beta_end < 1");
    std::vector<double> b(static_cast<std::size_t>(T));
    if (T == 1) {
        b[0] = beta_start;
    } else {
        for (int i = 0; i < T; ++i)
            b[static_cast<std::size_t>(i)] = beta_start + (beta_end - beta_start) * i / (T - 1);
    }
    return VarianceSchedule(std::move(b));
}

/// Anything that estimates the noise in x_t. Must return a field of the
/// same shape.
template <class P>
concept NoisePredictor = requires(const P& p, const RealField& x, int t) {
    { p.predict(x, t) } -> std::convertible_to<RealField>;
};

inline RealField standard_normal_field(std::size_t width, std::size_t height, std::size_t channels, Rng& rng)
{
    RealField z(width, height, channels);
    for (auto& v : z.values())
        v = rng.normal();
    return z;
}

inline RealField standard_normal_like(const RealField& shape, Rng& rng)
{
    return standard_normal_field(shape.width(), shape.height(), shape.channels(), rng);
}

/// x_t = sqrt(1 - beta_t) x_prev + sqrt(beta_t) z with the given z.
inline RealField forward_step(const RealField& x_prev, int t, const VarianceSchedule& sched, const RealField& z)
{
    sched.check_step(t);
    detail::require(z.same_shape(x_prev), "noise shape must match the field");
    const double keep = std::sqrt(1.0 - sched.beta(t));
    const double add = std::sqrt(sched.beta(t));
    RealField out = x_prev;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = keep * x_prev[i] + add * z[i];
    return out;
}

inline RealField forward_step(const RealField& x_prev, int t, const VarianceSchedule& sched, Rng& rng)
{
    sched.check_step(t);
    return forward_step(x_prev, t, sched, standard_normal_like(x_prev, rng));
}

struct NoisedField {
    RealField x_t;
    RealField eps; // the noise actually used (zeros when t == 0)
};

/// x_t = sqrt(abar_t) x0 + sqrt(1 - abar_t) eps. t = 0 returns x0.
inline NoisedField forward_jump(const RealField& x0, int t, const VarianceSchedule& sched, const RealField& eps)
{
    sched.check_step(t, 0);
    detail::require(eps.same_shape(x0), "noise shape must match the field");
    if (t == 0)
        return {x0, RealField(x0.width(), x0.height(), x0.channels())};
    const double a = std::sqrt(sched.alpha_bar(t));
    const double s = std::sqrt(1.0 - sched.alpha_bar(t));
    RealField out = x0;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = a * x0[i] + s * eps[i];
    return {std::move(out), eps};
}

/// Draws eps from rng (no draws when t == 0).
inline NoisedField forward_jump(const RealField& x0, int t, const VarianceSchedule& sched, Rng& rng)
{
    sched.check_step(t, 0);
    if (t == 0)
        return {x0, RealField(x0.width(), x0.height(), x0.channels())};
    return forward_jump(x0, t, sched, standard_normal_like(x0, rng));
}

/// x0_hat = (x_t - sqrt(1 - abar_t) eps_hat) / sqrt(abar_t).
inline RealField recover_x0(const RealField& x_t, int t, const RealField& eps_hat, const VarianceSchedule& sched)
{
    if (t == 0)
        throw InvalidArgument("recover_x0 at t = 0 is an identity; pass t >= 1");
    sched.check_step(t);
    detail::require(eps_hat.same_shape(x_t), "noise estimate shape must match the field");
    const double a = std::sqrt(sched.alpha_bar(t));
    const double s = std::sqrt(1.0 - sched.alpha_bar(t));
    RealField out = x_t;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = (x_t[i] - s * eps_hat[i]) / a;
    return out;
}

/// Ancestral step with an explicit noise estimate:
/// x_{t-1} = (x_t - beta_t / sqrt(1 - abar_t) eps_hat) / sqrt(alpha_t) + sigma_t z,
/// sigma_t = sqrt(beta_t) for t > 1, 0 for t = 1 (no draws at t = 1).
inline RealField reverse_step_with(const RealField& x_t, int t, const RealField& eps_hat,
                                   const VarianceSchedule& sched, Rng& rng)
{
    sched.check_step(t);
    if (!eps_hat.same_shape(x_t))
        throw InvalidArgument("predictor output shape does not match its input");
    const double beta = sched.beta(t);
    const double inv_sqrt_alpha = 1.0 / std::sqrt(sched.alpha(t));
    const double coef = beta / std::sqrt(1.0 - sched.alpha_bar(t));
    RealField out = x_t;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = inv_sqrt_alpha * (x_t[i] - coef * eps_hat[i]);
    if (t > 1) {
        const double sigma = std::sqrt(beta);
        for (auto& v : out.values())
            v += sigma * rng.normal();
    }
    return out;
}

template <NoisePredictor P>
RealField reverse_step(const RealField& x_t, int t, const P& predictor, const VarianceSchedule& sched, Rng& rng)
{
    sched.check_step(t);
    return reverse_step_with(x_t, t, predictor.predict(x_t, t), sched, rng);
}

/// Runs the reverse chain from x_start at step t_start down to x_0.
template <NoisePredictor P>
RealField reverse_chain(RealField x, int t_start, const P& predictor, const VarianceSchedule& sched, Rng& rng)
{
    sched.check_step(t_start, 0);
    for (int t = t_start; t >= 1; --t)
        x = reverse_step(x, t, predictor, sched, rng);
    return x;
}

/// x_T ~ N(0, I), then reverse steps T..1.
template <NoisePredictor P>
RealField sample(std::size_t width, std::size_t height, std::size_t channels, const P& predictor,
                 const VarianceSchedule& sched, Rng& rng)
{
    auto x = standard_normal_field(width, height, channels, rng);
    return reverse_chain(std::move(x), sched.steps(), predictor, sched, rng);
}

/// Exact noise predictor for data x0 ~ N(mu0, sigma0^2 I), per channel.
/// eps_hat = (x_t - sqrt(abar) x0_mmse) / sqrt(1 - abar) with
/// x0_mmse = mu0 + sqrt(abar) sigma0^2 / (abar sigma0^2 + 1 - abar) (x_t - sqrt(abar) mu0).
class GaussianOraclePredictor {
public:
    GaussianOraclePredictor(double mu0, double sigma0_sq, VarianceSchedule schedule)
        : GaussianOraclePredictor(std::vector<double>{mu0}, std::vector<double>{sigma0_sq}, std::move(schedule))
    {
    }

    /// One (mean, variance) per channel; a single entry applies to all channels.
    GaussianOraclePredictor(std::vector<double> mu0, std::vector<double> sigma0_sq, VarianceSchedule schedule)
        : mu0_(std::move(mu0)), sigma0_sq_(std::move(sigma0_sq)), sched_(std::move(schedule))
    {
        detail::require(!mu0_.empty() && mu0_.size() == sigma0_sq_.size(),
                        "oracle needs matching mean and variance lists");
        for (double s : sigma0_sq_)
            detail::require(s > 0.0, "oracle variance must be positive");
    }

    const VarianceSchedule& schedule() const noexcept { return sched_; }
    double mu0(std::size_t channel = 0) const { return mu0_[pick(channel)]; }
    double sigma0_sq(std::size_t channel = 0) const { return sigma0_sq_[pick(channel)]; }

    double predict_scalar(double x_t, int t, std::size_t channel = 0) const
    {
        const double abar = sched_.alpha_bar(t);
        const double ra = std::sqrt(abar);
        const double mu = mu0(channel), s2 = sigma0_sq(channel);
        const double x0 = mu + ra * s2 / (abar * s2 + 1.0 - abar) * (x_t - ra * mu);
        return (x_t - ra * x0) / std::sqrt(1.0 - abar);
    }

    RealField predict(const RealField& x_t, int t) const
    {
        sched_.check_step(t);
        if (mu0_.size() != 1)
            detail::require(mu0_.size() == x_t.channels(), "oracle channel count does not match the field");
        RealField out = x_t;
        for (std::size_t c = 0; c < x_t.channels(); ++c) {
            auto src = x_t.channel(c);
            auto dst = out.channel(c);
            for (std::size_t i = 0; i < src.size(); ++i)
                dst[i] = predict_scalar(src[i], t, c);
        }
        return out;
    }

private:
    std::size_t pick(std::size_t channel) const noexcept { return mu0_.size() == 1 ? 0 : channel; }

    std::vector<double> mu0_;
    std::vector<double> sigma0_sq_;
    VarianceSchedule sched_;
};

static_assert(NoisePredictor<GaussianOraclePredictor>);

inline RealField oracle_predict(const RealField& x_t, int t, const GaussianOraclePredictor& oracle)
{
    return oracle.predict(x_t, t);
}

} // namespace rockseg
