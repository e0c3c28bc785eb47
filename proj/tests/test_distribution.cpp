#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "wmit/distribution.hpp"
#include "wmit/errors.hpp"

using namespace wmit;

namespace {

// One random parameter draw per family, from the seeded generator.
Distribution random_law(const std::string& family, oracle::Gen& g) {
    if (family == "uniform") return make_parametric("uniform", {{"b", g.uniform(0.2, 5)}});
    if (family == "exponential") return make_parametric("exponential", {{"rate", g.uniform(0.2, 5)}});
    if (family == "frechet")
        return make_parametric("frechet", {{"c", g.uniform(0.5, 2)}, {"gamma", g.uniform(1.5, 4)}});
    if (family == "power") return make_parametric("power", {{"a", g.uniform(0.5, 4)}, {"b", g.uniform(0.5, 3)}});
    if (family == "weibull")
        return make_parametric("weibull", {{"shape", g.uniform(0.6, 4)}, {"scale", g.uniform(0.5, 2)}});
    if (family == "erlang")
        return make_parametric("erlang", {{"k", double(g.integer(1, 5))}, {"rate", g.uniform(0.5, 3)}});
    return make_parametric("exp-erlang-mix", {{"w", g.uniform(0.05, 0.95)}});
}

}  // namespace

TEST(MakeParametric, Examples) {
    EXPECT_NEAR(make_parametric("exponential", {{"rate", 1}}).cdf(1.0), 1 - std::exp(-1.0), 1e-15);
    EXPECT_NEAR(make_parametric("uniform", {{"b", 2}}).quantile(0.25), 0.5, 1e-12);
    EXPECT_NEAR(make_parametric("frechet", {{"c", 1}, {"gamma", 1}}).cdf(1.0), std::exp(-1.0), 1e-15);
}

TEST(MakeParametric, Errors) {
    EXPECT_THROW(make_parametric("gamma", {{"k", 1}}), ConfigError);
    EXPECT_THROW(make_parametric("exponential", {{"rate", 0}}), DomainError);
    EXPECT_THROW(make_parametric("exponential", {{"rate", -1}}), DomainError);
    EXPECT_THROW(make_parametric("uniform", {{"b", -2}}), DomainError);
    EXPECT_THROW(make_parametric("weibull", {{"shape", 1}, {"scale", 0}}), DomainError);
}

TEST(MakeParametric, WitnessDensity) {
    // f(x) = (1/3)(1 + 2x) e^-x
    const auto d = make_parametric("exp-erlang-mix", {{"w", 2.0 / 3.0}});
    for (double x : {0.1, 1.0, 3.0}) EXPECT_NEAR(d.pdf(x), (1 + 2 * x) * std::exp(-x) / 3, 1e-14);
}

TEST(Hazards, Examples) {
    const auto h = hazards(make_parametric("exponential", {{"rate", 1}}));
    const double e = std::exp(-1.0);
    EXPECT_NEAR(h.reversed_hazard(1.0), e / (1 - e), 1e-12);
    EXPECT_NEAR(h.cum_reversed_hazard(1.0), -std::log(1 - e), 1e-12);
    EXPECT_NEAR(h.reversed_hazard(1.0), 0.581977, 1e-6);
    EXPECT_NEAR(hazards(make_parametric("uniform", {{"b", 1}})).hazard(0.5), 2.0, 1e-12);
}

TEST(Hazards, BelowFloorThrows) {
    const auto h = hazards(make_parametric("exponential", {{"rate", 1}}));
    EXPECT_THROW(h.reversed_hazard(1e-14), DomainError);
    EXPECT_THROW(h.cum_reversed_hazard(0.0), DomainError);
}

TEST(Hazards, EmpiricalHasNoDensity) {
    std::vector<double> s;
    for (int i = 1; i <= 20; ++i) s.push_back(i);
    EXPECT_THROW(hazards(from_samples(s).as_distribution()), UnsupportedError);
}

TEST(FromSamples, Examples) {
    const auto e = from_samples({1, 2, 3, 4}, 4);
    EXPECT_DOUBLE_EQ(e.cdf(2.5), 0.5);
    EXPECT_DOUBLE_EQ(e.quantile(0.5), 2.0);
    EXPECT_THROW(from_samples({1, 2, 3, 4}), DomainError);
    EXPECT_THROW(from_samples({1, 2, 3, -4, 5, 6, 7, 8, 9, 10}), DomainError);
}

TEST(FromSamples, MonteCarloConcentration) {
    std::mt19937_64 rng(99);
    std::exponential_distribution<double> ex(1.0);
    std::vector<double> s(100000);
    for (auto& x : s) x = ex(rng);
    EXPECT_NEAR(from_samples(s).cdf(1.0), 0.632, 0.005);
}

TEST(FromSamples, StepCdfMatchesCount) {
    oracle::Gen g(3);
    std::vector<double> s(57);
    for (auto& x : s) x = g.uniform(0, 10);
    const auto e = from_samples(s);
    for (double x : {0.5, 2.0, 5.0, 9.9}) {
        const double count = std::count_if(s.begin(), s.end(), [&](double v) { return v <= x; });
        EXPECT_DOUBLE_EQ(e.cdf(x), count / s.size());
    }
}

class FamilyProperty : public ::testing::TestWithParam<std::string> {};

TEST_P(FamilyProperty, PdfNormalizes) {
    oracle::Gen g(std::hash<std::string>{}(GetParam()));
    for (int rep = 0; rep < 20; ++rep) {
        const auto d = random_law(GetParam(), g);
        const auto sup = d.support();
        const double total = std::isfinite(sup.upper)
                                 ? oracle::tanh_sinh([&](double x) { return d.pdf(x); }, sup.lower, sup.upper, 9)
                                 : oracle::tanh_sinh_inf([&](double x) { return d.pdf(x); }, sup.lower, 10);
        EXPECT_NEAR(total, 1.0, 1e-6) << d.name();
    }
}

TEST_P(FamilyProperty, QuantileRoundTrip) {
    oracle::Gen g(17 + std::hash<std::string>{}(GetParam()));
    for (int rep = 0; rep < 20; ++rep) {
        const auto d = random_law(GetParam(), g);
        for (double p : {0.05, 0.25, 0.5, 0.75, 0.95}) {
            EXPECT_NEAR(d.cdf(d.quantile(p)), p, 1e-6) << d.name();
            const double x = d.quantile(p);
            EXPECT_NEAR(d.quantile(d.cdf(x)), x, 1e-6 * (1 + x)) << d.name();
        }
    }
}

TEST_P(FamilyProperty, HazardIdentities) {
    oracle::Gen g(29 + std::hash<std::string>{}(GetParam()));
    for (int rep = 0; rep < 5; ++rep) {
        const auto d = random_law(GetParam(), g);
        const auto h = hazards(d);
        const Grid grid = quantile_grid(d, 40, 0.02, 0.98);
        double prevT = INFINITY;
        for (double x : grid.points()) {
            EXPECT_NEAR(h.reversed_hazard(x) * d.cdf(x), d.pdf(x), 1e-8 * (1 + d.pdf(x)));
            EXPECT_NEAR(h.cum_reversed_hazard(x), -std::log(d.cdf(x)), 1e-10);
            EXPECT_LT(h.cum_reversed_hazard(x), prevT);
            prevT = h.cum_reversed_hazard(x);
        }
        // T(x) = integral of tau from x to the upper end
        const double x0 = d.quantile(0.3);
        const double upper = d.effective_upper();
        const double viaTau =
            oracle::tanh_sinh([&](double u) { return d.pdf(u) / d.cdf(u); }, x0, upper, 9);
        EXPECT_NEAR(h.cum_reversed_hazard(x0), viaTau, 1e-5) << d.name();
    }
}

INSTANTIATE_TEST_SUITE_P(Builtins, FamilyProperty,
                         ::testing::Values("uniform", "exponential", "frechet", "power", "weibull", "erlang",
                                           "exp-erlang-mix"),
                         [](const auto& info) {
                             std::string s = info.param;
                             std::replace(s.begin(), s.end(), '-', '_');
                             return s;
                         });

TEST(DistributionHandle, SameLawAndName) {
    const auto a = make_parametric("exponential", {{"rate", 2}});
    const auto b = make_parametric("exponential", {{"rate", 2}});
    const auto c = make_parametric("exponential", {{"rate", 3}});
    EXPECT_TRUE(a.same_law(b));
    EXPECT_FALSE(a.same_law(c));
    EXPECT_EQ(a.name(), "exponential(rate=2)");
}

TEST(DistributionHandle, MeanBySurvival) {
    EXPECT_NEAR(make_parametric("exponential", {{"rate", 4}}).mean(), 0.25, 1e-8);
    EXPECT_NEAR(make_parametric("erlang", {{"k", 3}, {"rate", 2}}).mean(), 1.5, 1e-8);
    EXPECT_NEAR(make_parametric("uniform", {{"b", 3}}).mean(), 1.5, 1e-8);
}
