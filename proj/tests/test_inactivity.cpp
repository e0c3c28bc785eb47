#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "wmit/applied.hpp"
#include "wmit/distribution.hpp"
#include "wmit/errors.hpp"
#include "wmit/inactivity.hpp"
#include "wmit/weights.hpp"

using namespace wmit;

namespace {
Distribution expo(double rate) { return make_parametric("exponential", {{"rate", rate}}); }
Distribution unif(double b) { return make_parametric("uniform", {{"b", b}}); }
WeightFn identity() { return make_weight("identity"); }

double mit_expo1(double t) { return (t - 1 + std::exp(-t)) / (1 - std::exp(-t)); }

// phi = c * tau of exponential(1): constant WMIT c.
WeightFn constant_wmit_weight(double c) {
    return WeightFn::custom("c*tau", [c](double x) { return c * std::exp(-x) / -std::expm1(-x); });
}

std::vector<std::pair<Distribution, WeightFn>> builtin_pairs() {
    std::vector<Distribution> ds = {unif(1),
                                    expo(1),
                                    make_parametric("weibull", {{"shape", 2}, {"scale", 1}}),
                                    make_parametric("weibull", {{"shape", 0.7}, {"scale", 1}}),
                                    make_parametric("erlang", {{"k", 3}, {"rate", 2}}),
                                    make_parametric("power", {{"a", 2}, {"b", 1}}),
                                    make_parametric("frechet", {{"c", 1}, {"gamma", 3}})};
    std::vector<std::pair<Distribution, WeightFn>> out;
    for (const auto& d : ds) {
        out.emplace_back(d, identity());
        out.emplace_back(d, make_weight("power", std::nullopt, 2.0));
        out.emplace_back(d, make_weight("power", std::nullopt, 0.5));
        out.emplace_back(d, make_weight("cdf-of", d));
    }
    return out;
}
}  // namespace

TEST(Mit, Examples) {
    EXPECT_NEAR(mit(unif(1), 0.6), 0.3, 1e-10);
    EXPECT_NEAR(mit(expo(1), 1.0), mit_expo1(1.0), 1e-10);
    EXPECT_NEAR(mit(expo(1), 1.0), 0.581977, 1e-6);
    const auto u = unif(1);
    EXPECT_NEAR(mit(u, u.quantile(0.5)), 0.25, 1e-10);
    EXPECT_THROW(mit(expo(1), 1e-14), DomainError);
}

TEST(Mit, ClosedFormSweep) {
    for (double t : {0.01, 0.2, 1.0, 3.0, 10.0}) EXPECT_NEAR(mit(expo(1), t), mit_expo1(t), 1e-9 * (1 + t));
}

TEST(Wmit, Examples) {
    // parallel system of two uniforms, weight = cdf of one component
    const auto sys = order_statistic_law(unif(1), 2, 2);
    EXPECT_NEAR(wmit::wmit(sys, make_weight("cdf-of", unif(1)), 0.5), 1.0 / 6.0, 1e-9);
    EXPECT_NEAR(wmit::wmit(expo(1), identity(), 1.0), 0.581977, 1e-6);
    EXPECT_NEAR(wmit::wmit(unif(1), make_weight("half-square"), 1.0), 1.0 / 3.0, 1e-9);
}

TEST(Wmit, CurveMatchesPointwise) {
    const auto d = make_parametric("weibull", {{"shape", 1.5}, {"scale", 1}});
    const auto w = make_weight("power", std::nullopt, 2.0);
    const Grid g = quantile_grid(d, 50);
    const auto curve = wmit_curve(d, w, g, 1e-10);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(curve[i], wmit::wmit(d, w, g[i], 1e-10), 1e-8) << g[i];
}

TEST(Wmrl, Examples) {
    EXPECT_NEAR(wmrl(expo(1), identity(), 0.0), 1.0, 1e-8);
    EXPECT_NEAR(wmrl(expo(1), identity(), 2.0), 1.0, 1e-8);
    EXPECT_NEAR(wmrl(expo(1), make_weight("cdf-of", expo(1)), 0.0), 0.5, 1e-8);
}

TEST(Wmrl, InfiniteExpectationDetected) {
    // Frechet with gamma = 1 has no mean
    EXPECT_THROW(wmrl(make_parametric("frechet", {{"c", 1}, {"gamma", 1}}), identity(), 1.0), NumericalError);
}

TEST(WeightedPastMean, Examples) {
    EXPECT_NEAR(weighted_past_mean(unif(1), identity(), 1.0), 0.5, 1e-9);
    EXPECT_NEAR(weighted_past_mean(unif(1), identity(), 0.5), 0.25, 1e-9);
    EXPECT_NEAR(weighted_past_mean(expo(1), identity(), 1.0), 1 - mit_expo1(1.0), 1e-9);
}

TEST(WmitDerivative, Examples) {
    const auto d = expo(1);
    const Grid g = Grid::logarithmic(0.05, 8.0, 40);
    EXPECT_LE(wmit_derivative_check(d, identity(), g), 1e-4);
    EXPECT_LE(wmit_derivative_check(unif(1), make_weight("power", std::nullopt, 2.0), Grid::uniform(0.05, 0.95, 30)),
              1e-4);
    const auto w = constant_wmit_weight(0.7);
    for (double t : g.points()) {
        EXPECT_NEAR(wmit::wmit(d, w, t, 1e-10), 0.7, 1e-7) << t;
        EXPECT_NEAR(wmit_derivative(d, w, t), 0.0, 1e-6) << t;
    }
    EXPECT_LE(wmit_derivative_check(d, w, g), 1e-4);
}

TEST(WmitDerivative, EmpiricalUnsupported) {
    std::vector<double> s;
    for (int i = 1; i <= 30; ++i) s.push_back(0.1 * i);
    const auto e = from_samples(s).as_distribution();
    EXPECT_THROW(wmit_derivative_check(e, identity(), Grid::uniform(0.5, 2.5, 5)), UnsupportedError);
}

TEST(ReconstructCdf, Examples) {
    const auto id = identity();
    EXPECT_NEAR(reconstruct_cdf([](double x) { return x / 2; }, [](double) { return 0.5; }, id, 0.5, 1.0), 0.5, 1e-4);

    const auto d = expo(1);
    auto m = [&](double x) { return mit(d, x); };
    auto dm = [&](double x) { return wmit_derivative(d, id, x); };
    EXPECT_NEAR(reconstruct_cdf(m, dm, id, 1.0, d.effective_upper(), 1e-8), 1 - std::exp(-1.0), 1e-3);

    const auto w = constant_wmit_weight(0.7);
    for (double t : {0.3, 1.0, 2.0}) {
        const double F = reconstruct_cdf([](double) { return 0.7; }, [](double) { return 0.0; }, w, t,
                                         d.effective_upper(), 1e-8);
        EXPECT_NEAR(F, d.cdf(t), 1e-3) << t;
    }
}

TEST(ReconstructCdf, NonPositiveCurveRejected) {
    EXPECT_THROW(reconstruct_cdf([](double x) { return x - 0.7; }, [](double) { return 1.0; }, identity(), 0.5, 1.0),
                 Error);
}

TEST(ReconstructCdf, RoundTripEveryFamily) {
    const auto id = identity();
    for (const auto& fam : builtin_families()) {
        Distribution d = [&] {
            if (fam == "uniform") return unif(2);
            if (fam == "exponential") return expo(1.5);
            if (fam == "frechet") return make_parametric("frechet", {{"c", 1}, {"gamma", 3}});
            if (fam == "power") return make_parametric("power", {{"a", 2}, {"b", 1}});
            if (fam == "weibull") return make_parametric("weibull", {{"shape", 2}, {"scale", 1}});
            if (fam == "erlang") return make_parametric("erlang", {{"k", 2}, {"rate", 1}});
            return make_parametric(fam, {{"w", 2.0 / 3.0}});
        }();
        const double upper = d.effective_upper();
        auto m = [&](double x) { return mit(d, x, 1e-10); };
        auto dm = [&](double x) { return wmit_derivative(d, id, x, 1e-10); };
        for (int i = 1; i <= 10; ++i) {
            const double t = d.quantile(0.09 * i);
            EXPECT_NEAR(reconstruct_cdf(m, dm, id, t, upper, 1e-8), d.cdf(t), 1e-3) << fam << " t=" << t;
        }
    }
}

TEST(Iwmit, FrechetPowerTwo) {
    const auto d = make_parametric("frechet", {{"c", 1}, {"gamma", 1}});
    const auto rep = iwmit_classify(d, make_weight("power", std::nullopt, 2.0), quantile_grid(d, 128, 0.01, 0.99));
    EXPECT_TRUE(rep.cond_iii_holds());
    EXPECT_TRUE(rep.x_tau_holds());
    EXPECT_TRUE(rep.any_sufficient());
    EXPECT_EQ(rep.direct.kind, Monotonicity::increasing);
}

TEST(Iwmit, ExponentialIdentityIncreasing) {
    const auto d = expo(1);
    const auto rep = iwmit_classify(d, identity(), quantile_grid(d, 128));
    EXPECT_EQ(rep.direct.kind, Monotonicity::increasing);
    EXPECT_FALSE(rep.contradiction());
}

TEST(Iwmit, NeverDecreasingOnBuiltins) {
    for (const auto& [d, w] : builtin_pairs()) {
        const auto rep = iwmit_classify(d, w, quantile_grid(d, 96));
        EXPECT_NE(rep.direct.kind, Monotonicity::decreasing) << d.name() << " " << w.kind();
        EXPECT_FALSE(rep.contradiction()) << d.name() << " " << w.kind();
    }
}

TEST(DynamicCumulativeEntropy, Examples) {
    EXPECT_NEAR(dynamic_cumulative_entropy(unif(1), 1.0), 0.25, 1e-8);
    EXPECT_NEAR(dynamic_cumulative_entropy(unif(1), 0.5), 0.125, 1e-8);
    EXPECT_NEAR(dynamic_cumulative_entropy(expo(1), 40.0), oracle::basel_minus_one(), 1e-7);
}

TEST(Auc, Examples) {
    const auto a = auc(expo(1), expo(1));
    EXPECT_NEAR(a.auc, 0.5, 1e-8);
    const auto b = auc(expo(1), expo(2));
    EXPECT_NEAR(b.auc, 2.0 / 3.0, 1e-8);
    for (double r : b.residuals) EXPECT_LE(r, 1e-6);
    EXPECT_NEAR(auc(unif(1), unif(1)).auc, 0.5, 1e-8);
}

TEST(AgeReplacement, Examples) {
    const auto d = expo(1);
    EXPECT_NEAR(age_replacement_mttf(d, d.quantile(1e-8)), 1.0, 1e-6);
    EXPECT_NEAR(age_replacement_mttf(d, 1.0), 1.0, 1e-9);
    EXPECT_NEAR(age_replacement_mttf(unif(1), 0.5), 0.75, 1e-9);
}

TEST(InactivityProperties, SandwichAndConsistency) {
    for (const auto& [d, w] : builtin_pairs()) {
        if (w.kind() == "power" && w.phi(0.0) == INFINITY) continue;  // phi unbounded at 0
        const Grid g = quantile_grid(d, 40, 0.01, 0.99);
        const Grid full = quantile_grid(d, 400, 1e-9, 0.99);
        const auto [m, M] = check_bounds(w, full);
        for (double t : g.points()) {
            const double mt = mit(d, t), wt = wmit::wmit(d, w, t);
            EXPECT_GE(wt, 0.0);
            EXPECT_LE(m * mt, wt + 1e-7) << d.name() << " " << w.kind() << " t=" << t;
            EXPECT_LE(wt, M * mt + 1e-7) << d.name() << " " << w.kind() << " t=" << t;
            if (w.psi_finite()) {
                EXPECT_LE(wt, w.psi(t) + 1e-9);
                EXPECT_NEAR(wt + weighted_past_mean(d, w, t), w.psi(t), 1e-7 * (1 + w.psi(t)));
            }
        }
    }
}

TEST(InactivityProperties, ConvexPsiInequality) {
    oracle::Gen gen(77);
    for (int rep = 0; rep < 12; ++rep) {
        const auto d = make_parametric("weibull", {{"shape", gen.uniform(0.6, 3)}, {"scale", gen.uniform(0.5, 2)}});
        const double r_convex = gen.uniform(1.0, 3.0), r_concave = gen.uniform(0.2, 1.0);
        const auto wv = make_weight("power", std::nullopt, r_convex);
        const auto wc = make_weight("power", std::nullopt, r_concave);
        const Grid grid = quantile_grid(d, 12, 0.02, 0.98);
        for (double t : grid.points()) {
            const double mt = mit(d, t);
            EXPECT_GE(wmit::wmit(d, wv, t), wv.psi(mt) - 1e-8) << d.name() << " r=" << r_convex;
            EXPECT_LE(wmit::wmit(d, wc, t), wc.psi(mt) + 1e-8) << d.name() << " r=" << r_concave;
        }
    }
}
