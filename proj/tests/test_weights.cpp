#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "wmit/distribution.hpp"
#include "wmit/errors.hpp"
#include "wmit/weights.hpp"

using namespace wmit;

namespace {
Distribution expo(double rate) { return make_parametric("exponential", {{"rate", rate}}); }
Distribution unif(double b) { return make_parametric("uniform", {{"b", b}}); }
}  // namespace

TEST(MakeWeight, Examples) {
    const auto hs = make_weight("half-square");
    EXPECT_DOUBLE_EQ(hs.psi(3.0), 4.5);
    EXPECT_DOUBLE_EQ(hs.phi(3.0), 3.0);
    const auto p2 = make_weight("power", std::nullopt, 2.0);
    EXPECT_DOUBLE_EQ(p2.psi(3.0), 9.0);
    EXPECT_DOUBLE_EQ(p2.phi(3.0), 6.0);
    EXPECT_NEAR(make_weight("cdf-of", expo(1)).psi(1.0), 1 - std::exp(-1.0), 1e-15);
    EXPECT_NEAR(make_weight("odds-of", unif(1)).phi(0.25), 3.0, 1e-12);
    EXPECT_NEAR(make_weight("hazard-of", expo(2)).phi(0.7), 2.0, 1e-12);
}

TEST(MakeWeight, Errors) {
    EXPECT_THROW(make_weight("cdf-of"), ConfigError);
    EXPECT_THROW(make_weight("no-such-kind"), ConfigError);
    EXPECT_THROW(make_weight("power", std::nullopt, -1.0), DomainError);
    EXPECT_THROW(make_weight("odds-of", unif(1)).psi(0.5), DomainError);
    // Erlang-2 density rises from 0, so -log f is not an admissible weight.
    try {
        make_weight("neglog-density", make_parametric("erlang", {{"k", 2}, {"rate", 1}}));
        FAIL() << "expected PreconditionViolation";
    } catch (const PreconditionViolation& e) {
        EXPECT_GE(e.witness(), 0.0);
    }
}

TEST(MakeWeight, NeglogDensityOfExponential) {
    // psi = log(f(0)/f(x)) = x/2, phi = -f'/f = 1/2
    const auto w = make_weight("neglog-density", expo(0.5));
    EXPECT_NEAR(w.phi(3.0), 0.5, 1e-12);
    EXPECT_NEAR(w.psi(3.0), 1.5, 1e-9);
}

TEST(CheckBounds, Examples) {
    const Grid g01 = Grid::uniform(0.0, 1.0, 101);
    const auto [m1, M1] = check_bounds(make_weight("identity"), g01);
    EXPECT_EQ(m1, 1.0);
    EXPECT_EQ(M1, 1.0);

    // phi = sf of exponential(1) on [0, 10]
    const auto sf = WeightFn::custom("sf", [](double x) { return std::exp(-x); });
    const auto [m2, M2] = check_bounds(sf, Grid::uniform(0.0, 10.0, 201));
    EXPECT_NEAR(m2, std::exp(-10.0), 1e-15);
    EXPECT_NEAR(M2, 1.0, 1e-15);

    const auto [m3, M3] = check_bounds(make_weight("power", std::nullopt, 2.0), g01);
    EXPECT_NEAR(m3, 0.0, 1e-12);
    EXPECT_NEAR(M3, 2.0, 1e-12);
}

TEST(WeightInvariants, PsiMatchesIntegralOfPhi) {
    oracle::Gen g(41);
    std::vector<WeightFn> ws = {make_weight("identity"), make_weight("half-square"),
                                make_weight("power", std::nullopt, 0.5), make_weight("power", std::nullopt, 3.0),
                                make_weight("cdf-of", make_parametric("weibull", {{"shape", 2}, {"scale", 1}})),
                                make_weight("hazard-of", make_parametric("erlang", {{"k", 2}, {"rate", 1}})),
                                make_weight("mit-of", expo(1))};
    for (const auto& w : ws) {
        EXPECT_NEAR(w.psi(0.0), 0.0, 1e-12) << w.kind();
        for (int rep = 0; rep < 10; ++rep) {
            double a = g.uniform(0.01, 3), b = g.uniform(0.01, 3);
            if (a > b) std::swap(a, b);
            const double ref = oracle::tanh_sinh([&](double x) { return w.phi(x); }, a, b);
            EXPECT_NEAR(w.psi(b) - w.psi(a), ref, 1e-8 * (1 + std::abs(ref))) << w.kind();
            EXPECT_LE(w.psi(a), w.psi(b) + 1e-12) << w.kind();
            EXPECT_GE(w.phi(a), 0.0) << w.kind();
        }
    }
}

TEST(WeightInvariants, CustomPsiMatchesClosedForm) {
    const auto custom = WeightFn::custom("x^2 by quadrature", [](double x) { return 2 * x; });
    for (double x : {0.3, 1.0, 2.5, 7.0}) EXPECT_NEAR(custom.psi(x), x * x, 1e-7 * (1 + x * x));
}

TEST(WeightInvariants, ConvexMidpointAndSuperadditivity) {
    oracle::Gen g(43);
    for (double r : {1.0, 1.5, 2.0, 3.0}) {
        const auto w = make_weight("power", std::nullopt, r);
        ASSERT_TRUE(is_convex(certify_convexity(w, 0.0, 10.0).kind));
        for (int rep = 0; rep < 100; ++rep) {
            const double a = g.uniform(0, 10), b = g.uniform(0, 10);
            EXPECT_LE(w.psi(0.5 * (a + b)), 0.5 * (w.psi(a) + w.psi(b)) + 1e-12);
            EXPECT_GE(w.psi(a + b), w.psi(a) + w.psi(b) - 1e-12);
        }
    }
}

TEST(CertifyConvexity, GridDecidesForCustomWeights) {
    const auto convex = WeightFn::custom("cubic", [](double x) { return 3 * x * x; });
    const auto concave = WeightFn::custom("sqrt", [](double x) { return 0.5 / std::sqrt(x); });
    const auto sshape = make_weight("cdf-of", make_parametric("erlang", {{"k", 2}, {"rate", 1}}));
    const auto c1 = certify_convexity(convex, 0.01, 5.0);
    EXPECT_FALSE(c1.declared);
    EXPECT_EQ(c1.kind, Convexity::convex);
    EXPECT_GE(c1.pairs, 512u);
    EXPECT_EQ(certify_convexity(concave, 0.01, 5.0).kind, Convexity::concave);
    EXPECT_EQ(certify_convexity(sshape, 0.01, 10.0).kind, Convexity::neither);
    const auto id = certify_convexity(make_weight("identity"), 0.0, 1.0);
    EXPECT_TRUE(id.declared);
    EXPECT_EQ(id.kind, Convexity::affine);
}
