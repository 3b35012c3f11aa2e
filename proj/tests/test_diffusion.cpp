#include <rockseg/diffusion.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace rockseg;

namespace {

RealField random_field(std::size_t w, std::size_t h, std::size_t c, Rng& rng)
{
    RealField f(w, h, c);
    for (auto& v : f.values())
        v = 2.0 * rng.uniform() - 1.0;
    return f;
}

struct ZeroPredictor {
    RealField predict(const RealField& x, int) const { return RealField(x.width(), x.height(), x.channels()); }
};

struct WrongShapePredictor {
    RealField predict(const RealField&, int) const { return RealField(1, 1, 1); }
};

// Reports the noise that maps the known clean field onto x_t.
struct KnownCleanPredictor {
    const RealField* x0;
    const VarianceSchedule* sched;
    RealField predict(const RealField& x, int t) const
    {
        RealField e = x;
        const double a = std::sqrt(sched->alpha_bar(t)), s = std::sqrt(1.0 - sched->alpha_bar(t));
        for (std::size_t i = 0; i < e.size(); ++i)
            e[i] = (x[i] - a * (*x0)[i]) / s;
        return e;
    }
};

} // namespace

TEST(Schedule, SingleStep)
{
    const auto s = make_linear_schedule(1, 0.3, 0.5);
    EXPECT_EQ(s.steps(), 1);
    EXPECT_DOUBLE_EQ(s.beta(1), 0.3);
    EXPECT_DOUBLE_EQ(s.alpha_bar(1), 0.7);
    EXPECT_DOUBLE_EQ(s.alpha_bar(0), 1.0);
}

TEST(Schedule, DefaultDestroysSignal)
{
    const auto s = make_linear_schedule(1000, 1e-4, 0.02);
    // Product recomputed independently in long double.
    long double prod = 1.0L;
    for (int t = 1; t <= 1000; ++t) {
        const long double beta = 1e-4L + (0.02L - 1e-4L) * (t - 1) / 999.0L;
        prod *= 1.0L - beta;
        ASSERT_NEAR(s.alpha_bar(t), static_cast<double>(prod), 1e-12 * static_cast<double>(prod));
    }
    EXPECT_NEAR(s.alpha_bar(1000), 4.0e-5, 0.1e-5);
    EXPECT_DOUBLE_EQ(s.beta(1), 1e-4);
    EXPECT_DOUBLE_EQ(s.beta(1000), 0.02);
}

TEST(Schedule, MonotoneForRandomInputs)
{
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const int T = 1 + static_cast<int>(rng.uniform_int(500));
        const double b0 = 1e-5 + 0.1 * rng.uniform();
        const double b1 = b0 + (0.99 - b0) * (0.01 + 0.99 * rng.uniform());
        const auto s = make_linear_schedule(T, b0, b1);
        for (int t = 1; t <= T; ++t) {
            ASSERT_LT(s.alpha_bar(t), s.alpha_bar(t - 1));
            ASSERT_EQ(s.alpha(t), 1.0 - s.beta(t));
            if (t > 1) {
                ASSERT_GT(s.beta(t), s.beta(t - 1));
            }
        }
    }
}

TEST(Schedule, Errors)
{
    EXPECT_THROW(make_linear_schedule(0), InvalidArgument);
    EXPECT_THROW(make_linear_schedule(10, 0.02, 0.01), InvalidArgument);
    EXPECT_THROW(make_linear_schedule(10, 0.0, 0.01), InvalidArgument);
    EXPECT_THROW(make_linear_schedule(10, 0.1, 1.0), InvalidArgument);
    EXPECT_THROW(VarianceSchedule({0.1, 0.1}), InvalidArgument);
    const auto s = make_linear_schedule(5);
    EXPECT_THROW(s.beta(0), InvalidArgument);
    EXPECT_THROW(s.beta(6), InvalidArgument);
}

TEST(ForwardStep, DeterministicPartWithZeroNoise)
{
    Rng rng(1);
    const auto s = make_linear_schedule(100);
    const auto x = random_field(8, 8, 2, rng);
    const auto out = forward_step(x, 40, s, RealField(8, 8, 2));
    for (std::size_t i = 0; i < x.size(); ++i)
        EXPECT_EQ(out[i], std::sqrt(1.0 - s.beta(40)) * x[i]);
}

TEST(ForwardStep, NoiseVarianceIsBeta)
{
    Rng rng(10);
    const auto s = make_linear_schedule(1000);
    const auto out = forward_step(RealField(1000, 100), 700, s, rng);
    const auto m = oracle::moments(out.values());
    EXPECT_NEAR(m.variance, s.beta(700), 0.03 * s.beta(700));
}

TEST(ForwardStep, SeededAndRangeChecked)
{
    const auto s = make_linear_schedule(10);
    const RealField x(4, 4, 1, 0.25);
    Rng a(9), b(9);
    EXPECT_EQ(forward_step(x, 3, s, a), forward_step(x, 3, s, b));
    EXPECT_THROW(forward_step(x, 0, s, a), InvalidArgument);
    EXPECT_THROW(forward_step(x, 11, s, a), InvalidArgument);
}

TEST(ForwardJump, BoundaryCases)
{
    Rng rng(2);
    const auto s = make_linear_schedule(50);
    const auto x0 = random_field(5, 5, 1, rng);
    EXPECT_EQ(forward_jump(x0, 0, s, rng).x_t, x0);
    const auto zero = forward_jump(x0, 30, s, RealField(5, 5, 1));
    for (std::size_t i = 0; i < x0.size(); ++i)
        EXPECT_EQ(zero.x_t[i], std::sqrt(s.alpha_bar(30)) * x0[i]);
    EXPECT_THROW(forward_jump(x0, 10, s, RealField(4, 5, 1)), InvalidArgument);
    EXPECT_THROW(forward_jump(x0, 51, s, rng), InvalidArgument);
}

TEST(ForwardJump, ReturnsTheNoiseItUsed)
{
    const auto s = make_linear_schedule(50);
    const RealField x0(6, 3, 2, 0.4);
    Rng a(77), b(77);
    const auto res = forward_jump(x0, 20, s, a);
    EXPECT_EQ(res.eps, standard_normal_like(x0, b));
    EXPECT_EQ(forward_jump(x0, 20, s, res.eps).x_t, res.x_t);
}

TEST(ForwardJump, MatchesIteratedSteps)
{
    Rng rng(31);
    const auto s = make_linear_schedule(1000);
    const int t = 30;
    RealField x(100, 100, 1, 0.6);
    for (int k = 1; k <= t; ++k)
        x = forward_step(x, k, s, rng);
    const auto m = oracle::moments(x.values());
    const double n = static_cast<double>(m.n);
    const double mean = std::sqrt(s.alpha_bar(t)) * 0.6, var = 1.0 - s.alpha_bar(t);
    EXPECT_NEAR(m.mean, mean, 3.0 * std::sqrt(var / n));
    EXPECT_NEAR(m.variance, var, 3.0 * var * std::sqrt(2.0 / (n - 1)));
}

TEST(RecoverX0, InvertsForwardJump)
{
    Rng rng(4);
    const auto s = make_linear_schedule(200);
    for (int trial = 0; trial < 50; ++trial) {
        const int t = 1 + static_cast<int>(rng.uniform_int(200));
        const auto x0 = random_field(8, 8, 2, rng);
        const auto eps = standard_normal_like(x0, rng);
        const auto back = recover_x0(forward_jump(x0, t, s, eps).x_t, t, eps, s);
        for (std::size_t i = 0; i < x0.size(); ++i)
            ASSERT_NEAR(back[i], x0[i], 1e-10 * std::max(1.0, std::abs(x0[i])));
    }
}

TEST(RecoverX0, ZerosAndMisuse)
{
    const auto s = make_linear_schedule(20);
    const RealField z(3, 3);
    EXPECT_EQ(recover_x0(z, 5, z, s), z);
    EXPECT_THROW(recover_x0(z, 0, z, s), InvalidArgument);
    EXPECT_THROW(recover_x0(z, 21, z, s), InvalidArgument);
}

TEST(RecoverX0, OracleErrorShrinksAsSignalSurvives)
{
    const auto s = make_linear_schedule(1000);
    const double mu = 0.2, s2 = 0.09;
    const GaussianOraclePredictor oracle(mu, s2, s);
    Rng rng(8);
    double previous = std::numeric_limits<double>::infinity();
    for (int t : {900, 500, 200, 50, 5}) {
        RealField x0(200, 100);
        for (auto& v : x0.values())
            v = mu + std::sqrt(s2) * rng.normal();
        const auto noised = forward_jump(x0, t, s, rng);
        const auto est = recover_x0(noised.x_t, t, oracle.predict(noised.x_t, t), s);
        double mse = 0.0;
        for (std::size_t i = 0; i < x0.size(); ++i)
            mse += (est[i] - x0[i]) * (est[i] - x0[i]);
        mse /= static_cast<double>(x0.size());
        const double ab = s.alpha_bar(t);
        const double analytic = (1.0 - ab) * s2 / (ab * s2 + 1.0 - ab);
        EXPECT_NEAR(mse, analytic, 0.05 * analytic) << "t=" << t;
        EXPECT_LT(mse, previous);
        previous = mse;
    }
}

TEST(ReverseStep, FinalStepRecoversCleanSignalWithTrueNoise)
{
    Rng rng(12);
    const auto s = make_linear_schedule(100);
    const auto x0 = random_field(6, 6, 2, rng);
    const auto noised = forward_jump(x0, 1, s, rng);
    const auto x_prev = reverse_step_with(noised.x_t, 1, noised.eps, s, rng);
    // Hand-expanded coefficients at t = 1: 1/sqrt(alpha_1) and beta_1/sqrt(1-alpha_1).
    const double c0 = 1.0 / std::sqrt(1.0 - 1e-4), c1 = 1e-4 / std::sqrt(1e-4);
    for (std::size_t i = 0; i < x0.size(); ++i) {
        EXPECT_NEAR(x_prev[i], c0 * (noised.x_t[i] - c1 * noised.eps[i]), 1e-14);
        EXPECT_NEAR(x_prev[i], x0[i], 1e-12);
    }
}

TEST(ReverseStep, VanishingBetaIsIdentity)
{
    const VarianceSchedule s({1e-14, 2e-14, 3e-14});
    Rng rng(1);
    const auto x = random_field(5, 5, 1, rng);
    const auto out = reverse_step(x, 3, ZeroPredictor{}, s, rng);
    for (std::size_t i = 0; i < x.size(); ++i)
        EXPECT_NEAR(out[i], x[i], 1e-6);
}

TEST(ReverseStep, SeededAndShapeChecked)
{
    const auto s = make_linear_schedule(10);
    const RealField x(4, 4, 1, 0.1);
    const GaussianOraclePredictor oracle(0.0, 0.5, s);
    Rng a(3), b(3);
    EXPECT_EQ(reverse_step(x, 5, oracle, s, a), reverse_step(x, 5, oracle, s, b));
    EXPECT_THROW(reverse_step(x, 5, WrongShapePredictor{}, s, a), InvalidArgument);
}

TEST(ReverseStep, KnownCleanPredictorGivesExactOneStepInverse)
{
    Rng rng(44);
    const auto s = make_linear_schedule(30);
    const auto x0 = random_field(7, 5, 1, rng);
    const KnownCleanPredictor p{&x0, &s};
    const auto x1 = forward_jump(x0, 1, s, rng).x_t;
    const auto back = reverse_chain(x1, 1, p, s, rng);
    for (std::size_t i = 0; i < x0.size(); ++i)
        EXPECT_NEAR(back[i], x0[i], 1e-12);
}

TEST(Sample, SingleStepMatchesPosteriorMeanMap)
{
    // With T = 1 there is no injected noise: the output is the oracle's
    // posterior mean evaluated at x_1 ~ N(0, 1), an affine map with slope
    // k = sqrt(abar) s2 / (abar s2 + 1 - abar).
    const double mu = 0.3, s2 = 0.04;
    const auto s = make_linear_schedule(1, 0.15, 0.5);
    const GaussianOraclePredictor oracle(mu, s2, s);
    Rng rng(2);
    const auto out = sample(100, 100, 1, oracle, s, rng);
    const double ab = s.alpha_bar(1), k = std::sqrt(ab) * s2 / (ab * s2 + 1.0 - ab);
    const auto m = oracle::moments(out.values());
    const double n = static_cast<double>(m.n);
    EXPECT_NEAR(m.mean, mu * (1.0 - k * std::sqrt(ab)), 3.0 * k / std::sqrt(n));
    EXPECT_NEAR(m.variance, k * k, 3.0 * k * k * std::sqrt(2.0 / (n - 1)));
}

TEST(Sample, ReproducesOracleMoments)
{
    const auto s = make_linear_schedule(200);
    const GaussianOraclePredictor oracle(0.3, 0.04, s);
    Rng rng(2025);
    const auto out = sample(100, 100, 1, oracle, s, rng);
    const auto m = oracle::moments(out.values());
    EXPECT_NEAR(m.mean, 0.3, 0.01);
    EXPECT_NEAR(m.variance, 0.04, 0.05 * 0.04);
}

TEST(Sample, Deterministic)
{
    const auto s = make_linear_schedule(20);
    const GaussianOraclePredictor oracle(-0.2, 0.1, s);
    Rng a(6), b(6);
    EXPECT_EQ(sample(8, 8, 2, oracle, s, a), sample(8, 8, 2, oracle, s, b));
}

TEST(Oracle, PointMassLimit)
{
    const auto s = make_linear_schedule(100);
    const double mu = 0.5;
    const GaussianOraclePredictor oracle(mu, 1e-14, s);
    for (int t : {1, 10, 99})
        for (double x : {-1.0, 0.2, 0.9}) {
            const double ab = s.alpha_bar(t);
            EXPECT_NEAR(oracle.predict_scalar(x, t), (x - std::sqrt(ab) * mu) / std::sqrt(1.0 - ab), 1e-6);
        }
}

TEST(Oracle, UnbiasedUnderMarginal)
{
    const auto s = make_linear_schedule(100);
    const double mu = 0.3, s2 = 0.2;
    const GaussianOraclePredictor oracle(mu, s2, s);
    Rng rng(5);
    for (int t : {5, 50, 100}) {
        RealField x0(1000, 100);
        for (auto& v : x0.values())
            v = mu + std::sqrt(s2) * rng.normal();
        const auto x_t = forward_jump(x0, t, s, rng).x_t;
        const auto m = oracle::moments(oracle_predict(x_t, t, oracle).values());
        EXPECT_NEAR(m.mean, 0.0, 3.0 * std::sqrt(m.variance / static_cast<double>(m.n))) << "t=" << t;
    }
}

TEST(Oracle, ResidualVarianceMatchesPosterior)
{
    // E[(eps_hat - eps)^2] = abar s2 / (abar s2 + 1 - abar): the estimate
    // becomes exact as abar -> 0 and uninformative as abar -> 1.
    const auto s = make_linear_schedule(1000);
    const double mu = -0.1, s2 = 0.05;
    const GaussianOraclePredictor oracle(mu, s2, s);
    Rng rng(15);
    for (int t : {1, 20, 300, 1000}) {
        RealField x0(500, 100);
        for (auto& v : x0.values())
            v = mu + std::sqrt(s2) * rng.normal();
        const auto noised = forward_jump(x0, t, s, rng);
        const auto eps_hat = oracle.predict(noised.x_t, t);
        double sq = 0.0;
        for (std::size_t i = 0; i < x0.size(); ++i)
            sq += (eps_hat[i] - noised.eps[i]) * (eps_hat[i] - noised.eps[i]);
        sq /= static_cast<double>(x0.size());
        const double ab = s.alpha_bar(t);
        const double analytic = ab * s2 / (ab * s2 + 1.0 - ab);
        EXPECT_NEAR(sq, analytic, 0.05 * analytic + 1e-12) << "t=" << t;
    }
}

TEST(Oracle, PerChannelParameters)
{
    const auto s = make_linear_schedule(10);
    const GaussianOraclePredictor oracle({0.1, -0.4}, {0.2, 0.3}, s);
    RealField x(2, 2, 2, 0.5);
    const auto e = oracle.predict(x, 4);
    EXPECT_DOUBLE_EQ(e(0, 0, 0), oracle.predict_scalar(0.5, 4, 0));
    EXPECT_DOUBLE_EQ(e(1, 1, 1), oracle.predict_scalar(0.5, 4, 1));
    EXPECT_NE(e(0, 0, 0), e(0, 0, 1));
    EXPECT_THROW(oracle.predict(RealField(2, 2, 3), 4), InvalidArgument);
    EXPECT_THROW(oracle.predict(x, 0), InvalidArgument);
    EXPECT_THROW(GaussianOraclePredictor(0.0, 0.0, s), InvalidArgument);
}
