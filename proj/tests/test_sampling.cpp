#include <gtest/gtest.h>

#include <boost/math/special_functions/beta.hpp>
#include <cmath>

#include "hypergeo/montecarlo.hpp"
#include "hypergeo/sampling.hpp"
#include "oracles.hpp"

using namespace hypergeo;

template <class S>
class SamplerTest : public ::testing::Test {};
using Scalars = ::testing::Types<double, cplx, Quaternion>;
TYPED_TEST_SUITE(SamplerTest, Scalars);

TYPED_TEST(SamplerTest, HaarIsUnitaryWithUnitDeterminantOverR) {
    using S = TypeParam;
    RngStream rng(1, 0);
    for (int rep = 0; rep < 200; ++rep) {
        const int q = 1 + rep % 4;
        const auto u = haar_unitary<S>(q, rng);
        EXPECT_TRUE(is_unitary(u, 1e-12));
        if constexpr (std::is_same_v<S, double>) EXPECT_GT(detail::to_eigen(u).determinant(), 0.0);
    }
}

TYPED_TEST(SamplerTest, HaarFirstColumnIsUniformOnSphere) {
    // |u_11|^2 ~ Beta(d/2, d(q-1)/2)
    using S = TypeParam;
    constexpr int d = field_dim_v<S>;
    const int q = 3;
    RngStream rng(2, 0);
    std::vector<double> xs;
    for (int rep = 0; rep < 4000; ++rep) xs.push_back(abs2(haar_unitary<S>(q, rng)(0, 0)));
    const double pv = oracle::ks_pvalue(xs, [&](double x) { return boost::math::ibeta(0.5 * d, 0.5 * d * (q - 1), x); });
    EXPECT_GT(pv, 1e-3);
}

TYPED_TEST(SamplerTest, BallSamplesLieInBall) {
    using S = TypeParam;
    RngStream rng(3, 0);
    for (int rep = 0; rep < 500; ++rep) {
        const int q = 1 + rep % 3;
        const double p = 2 * q - 1 + 0.5 + rep % 7;
        EXPECT_LT(sigma_max(sample_mp<S>(q, p, rng)), 1.0);
    }
    for (int rep = 0; rep < 200; ++rep) {
        const int q = 2 + rep % 2;
        const auto w = sample_mp_degenerate<S>(q, rng);
        EXPECT_LE(sigma_max(w), 1.0 + 1e-12);
    }
}

TYPED_TEST(SamplerTest, RadialLawMatchesBetaByKs) {
    using S = TypeParam;
    constexpr int d = field_dim_v<S>;
    const int q = 2;
    const double p = 5.5;
    RngStream rng(4, 0);
    for (int j = 1; j <= q; ++j) {
        std::vector<double> xs;
        for (int rep = 0; rep < 3000; ++rep) xs.push_back(sample_mp_factors<S>(q, p, rng)[j - 1].norm2());
        const double a = 0.5 * d * q, b = 0.5 * d * (p - q - j + 1);
        EXPECT_GT(oracle::ks_pvalue(xs, [&](double x) { return boost::math::ibeta(a, b, x); }), 1e-3) << "j=" << j;
    }
}

TYPED_TEST(SamplerTest, PMapOfSingleFactorIsTheFactor) {
    // q = 1: w is the scalar y_1 itself
    using S = TypeParam;
    RngStream rng(5, 0);
    const auto fs = sample_mp_factors<S>(1, 4.0, rng);
    const auto w = p_map(fs);
    EXPECT_LT(abs2(w(0, 0) - fs[0].y[0]), 1e-28);
}

TEST(Sampler, CrnDrawIsMonotoneInP) {
    RngStream rng(6, 0);
    CrnBallDraw<double> draw(2, rng);
    double prev = 1.0;
    for (double p : {4.0, 8.0, 16.0, 64.0}) {
        const double s = sigma_max(draw.sample(p));
        EXPECT_LT(s, prev + 1e-12);
        prev = s;
    }
    EXPECT_THROW(draw.sample(3.0), domain_error);
}

TEST(Sampler, KappaClosedFormValues) {
    // q = 1, d = 1: int_{-1}^{1} (1-w^2)^{p/2-3/2} dw = B(1/2, (p-1)/2)
    for (double p : {2.0, 3.0, 5.0, 10.0})
        EXPECT_NEAR(kappa(p, 1, 1), std::beta(0.5, 0.5 * (p - 1)), 1e-12);
    EXPECT_NEAR(kappa(3, 1, 1), 2.0, 1e-14);
    EXPECT_THROW(kappa(3, 3, 1), domain_error);
    EXPECT_THROW(kappa(3, 1, 2), domain_error);
}

TEST(Sampler, KappaMatchesMonteCarloOfDefinition) {
    // kappa = int_{B_q} Delta(I - w^* w)^{pd/2 - gamma} dw via uniform draws in the cube
    struct Case {
        int q, d;
        double p;
    };
    for (const Case c : {Case{1, 1, 3}, Case{2, 1, 5}, Case{2, 1, 6.5}, Case{1, 2, 4}}) {
        const int dim = c.d * c.q * c.q;
        const double ex = 0.5 * c.p * c.d - gamma_bc(c.d, c.q);
        McOptions opt;
        opt.samples = 200000;
        opt.seed = 99;
        auto run = run_monte_carlo(1, opt, [&](RngStream& rng, std::span<cplx> out) {
            auto body = [&]<class S>(std::type_identity<S>) {
                Matrix<S> w(c.q, c.q);
                for (int i = 0; i < c.q; ++i)
                    for (int j = 0; j < c.q; ++j) {
                        double v[4];
                        for (int k = 0; k < c.d; ++k) v[k] = 2 * rng.uniform() - 1;
                        for (int k = c.d; k < 4; ++k) v[k] = 0;
                        w(i, j) = from_components<S>(v);
                    }
                if (sigma_max(w) >= 1) {
                    out[0] = 0;
                    return;
                }
                const auto m = Matrix<S>::identity(c.q) - adjoint(w) * w;
                out[0] = std::pow(det_dieudonne(m), ex) * std::pow(2.0, dim);
            };
            if (c.d == 1) body(std::type_identity<double>{});
            else body(std::type_identity<cplx>{});
        });
        const auto& e = run.estimates[0];
        EXPECT_LE(std::abs(e.value.real() - kappa(c.p, c.d, c.q)), 3 * e.std_error)
            << "q=" << c.q << " d=" << c.d << " p=" << c.p;
    }
}

TEST(MonteCarlo, WorkersDoNotChangeResults) {
    McOptions a;
    a.samples = 10000;
    a.seed = 7;
    McOptions b = a;
    b.workers = 3;
    auto body = [](RngStream& rng, std::span<cplx> out) { out[0] = cplx(rng.normal(), rng.uniform()); };
    const auto ra = run_monte_carlo(1, a, body), rb = run_monte_carlo(1, b, body);
    EXPECT_EQ(ra.estimates[0].value, rb.estimates[0].value);
    EXPECT_EQ(ra.estimates[0].std_error, rb.estimates[0].std_error);
}

TEST(MonteCarlo, AccumulatorMergeEqualsSequential) {
    Accumulator whole, left, right;
    RngStream rng(8, 0);
    for (int i = 0; i < 1000; ++i) {
        const cplx z(rng.normal(), rng.normal());
        whole.add(z);
        (i < 400 ? left : right).add(z);
    }
    left.merge(right);
    EXPECT_NEAR(std::abs(left.mean() - whole.mean()), 0.0, 1e-14);
    EXPECT_NEAR(left.variance(), whole.variance(), 1e-12);
    EXPECT_EQ(left.count(), whole.count());
}

TEST(MonteCarlo, ConstantIntegrandHasZeroStderr) {
    McOptions o;
    o.samples = 1000;
    const auto r = run_monte_carlo(1, o, [](RngStream&, std::span<cplx> out) { out[0] = 1.0; });
    EXPECT_EQ(r.estimates[0].value, cplx(1.0));
    EXPECT_EQ(r.estimates[0].std_error, 0.0);
}
