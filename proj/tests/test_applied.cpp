#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "wmit/applied.hpp"
#include "wmit/distribution.hpp"
#include "wmit/errors.hpp"
#include "wmit/orders.hpp"
#include "wmit/weights.hpp"

using namespace wmit;

namespace {
Distribution expo(double rate) { return make_parametric("exponential", {{"rate", rate}}); }
Distribution unif(double b) { return make_parametric("uniform", {{"b", b}}); }
Distribution erlang2(double rate) { return make_parametric("erlang", {{"k", 2}, {"rate", rate}}); }

// Renewal function of Erlang(2, rate) interarrivals.
double erlang2_renewal(double rate, double t) { return rate * t / 2 - 0.25 + std::exp(-2 * rate * t) / 4; }
}  // namespace

TEST(OrderStatistic, MaximumAndMinimum) {
    const auto mx = order_statistic_law(unif(1), 3, 3), mn = order_statistic_law(unif(1), 1, 3);
    for (double x : {0.1, 0.5, 0.9}) {
        EXPECT_NEAR(mx.cdf(x), x * x * x, 1e-14);
        EXPECT_NEAR(mn.cdf(x), 1 - std::pow(1 - x, 3), 1e-14);
        EXPECT_NEAR(mx.pdf(x), 3 * x * x, 1e-12);
    }
    EXPECT_THROW(order_statistic_law(unif(1), 0, 3), DomainError);
    EXPECT_THROW(order_statistic_law(unif(1), 4, 3), DomainError);
}

TEST(ShockModel, CdfExamples) {
    const auto d = expo(1);
    const auto single = make_shock_model(d, CountLaw::deterministic(1));
    for (double t : {0.3, 1.0, 4.0}) EXPECT_NEAR(shock_lifetime_cdf(single, t), d.cdf(t), 1e-12);
    const auto geo = make_shock_model(d, CountLaw::geometric(0.5));
    EXPECT_NEAR(shock_lifetime_cdf(geo, 1.0), 1 - std::exp(-0.5), 1e-10);
    EXPECT_EQ(shock_lifetime_cdf(geo, 0.0), 0.0);
    for (double t : {0.1, 2.0, 10.0}) EXPECT_NEAR(shock_lifetime_sf(geo, t), std::exp(-0.5 * t), 1e-10);
}

TEST(ShockModel, Validation) {
    EXPECT_THROW(make_shock_model(expo(1), CountLaw::from_pmf({0.5, 0.5})), ConfigError);
    EXPECT_THROW(make_shock_model(expo(1), CountLaw::deterministic(1), [](double t) { return t + 1; }), ConfigError);
}

TEST(ShockModel, ValidCdf) {
    const auto m = make_shock_model(make_parametric("weibull", {{"shape", 2}, {"scale", 1}}),
                                    CountLaw::from_pmf({0, 0.3, 0.3, 0.4}));
    double prev = 0.0;
    const Grid grid = Grid::logarithmic(1e-3, 20.0, 300);
    for (double t : grid.points()) {
        const double F = shock_lifetime_cdf(m, t);
        EXPECT_GE(F, prev - 1e-15);
        prev = F;
    }
    EXPECT_NEAR(shock_lifetime_cdf(m, 1e-6), 0.0, 1e-10);
    EXPECT_NEAR(shock_lifetime_cdf(m, 20.0), 1.0, 1e-10);
}

TEST(ShockModel, MonteCarloMatchesCdf) {
    const auto m = make_shock_model(expo(1), CountLaw::geometric(0.5));
    const auto s = simulate_shock_lifetimes(m, 100000, 9);
    EXPECT_LE(oracle::ks_distance(s, [&](double t) { return shock_lifetime_cdf(m, t); }), 0.01);

    // independent simulation: geometric count of unit-exponential interarrivals
    std::mt19937_64 rng(10);
    std::geometric_distribution<int> ng(0.5);
    std::exponential_distribution<double> ex(1.0);
    std::vector<double> t(100000);
    for (auto& x : t) {
        const int n = ng(rng) + 1;
        x = 0;
        for (int j = 0; j < n; ++j) x += ex(rng);
    }
    EXPECT_LE(oracle::ks_distance(t, [&](double x) { return shock_lifetime_cdf(m, x); }), 0.01);
}

TEST(ShockModel, NonHomogeneousSimulationMatchesCdf) {
    const auto m = make_shock_model(make_parametric("weibull", {{"shape", 2}, {"scale", 1}}),
                                    CountLaw::from_pmf({0, 0.2, 0.5, 0.3}));
    const auto s = simulate_shock_lifetimes(m, 100000, 19);
    EXPECT_LE(oracle::ks_distance(s, [&](double t) { return shock_lifetime_cdf(m, t); }), 0.01);
    EXPECT_EQ(s, simulate_shock_lifetimes(m, 100000, 19, kernels::Exec::serial));
}

TEST(ShockOrder, Examples) {
    const auto d = expo(1);
    const auto w = make_weight("power", std::nullopt, 2.0);
    const auto m1 = make_shock_model(d, CountLaw::deterministic(1)), m2 = make_shock_model(d, CountLaw::geometric(0.5));
    const Grid g = default_order_grid(shock_lifetime(m1), shock_lifetime(m2));
    const auto fwd = shock_order_check(m1, m2, w, g);
    EXPECT_TRUE(fwd.antecedent_holds);
    EXPECT_FALSE(fwd.violation);
    ASSERT_FALSE(fwd.order_consequents.empty());
    EXPECT_TRUE(fwd.order_consequents.front().holds());

    const auto same = shock_order_check(m2, m2, w, g);
    EXPECT_TRUE(same.antecedent_holds);
    EXPECT_FALSE(same.violation);

    const auto rev = shock_order_check(m2, m1, w, g);
    EXPECT_FALSE(rev.antecedent_holds);
    EXPECT_FALSE(rev.violation);

    EXPECT_THROW(shock_order_check(m1, make_shock_model(expo(2), CountLaw::geometric(0.5)), w, g), ConfigError);
}

TEST(PoissonPrecondition, Examples) {
    const auto one = CountLaw::deterministic(1), geo = CountLaw::geometric(0.5);
    EXPECT_TRUE(poisson_shock_precondition(geo, geo, 1, 50).verdict.is_increasing_weakly());
    EXPECT_EQ(poisson_shock_precondition(one, geo, 1, 50).verdict.kind, Monotonicity::increasing);
    EXPECT_EQ(poisson_shock_precondition(one, geo, 2, 50).verdict.kind, Monotonicity::increasing);

    // the precondition for r = 2 agrees with the direct wmit verdict for psi = x^2
    const auto d = expo(1);
    const auto m1 = make_shock_model(d, one), m2 = make_shock_model(d, geo);
    const auto t1 = shock_lifetime(m1), t2 = shock_lifetime(m2);
    EXPECT_TRUE(check_order("wmit", t1, t2, make_weight("power", std::nullopt, 2.0), default_order_grid(t1, t2)).holds());
}

TEST(PoissonPrecondition, BruteForcePartialSums) {
    const auto n1 = CountLaw::from_pmf({0, 0.6, 0.4}), n2 = CountLaw::geometric(0.3);
    for (unsigned r : {1u, 2u, 3u}) {
        std::vector<double> ratio;
        for (unsigned j = r; j <= 40; ++j) {
            double s1 = 0, s2 = 0;
            for (unsigned k = 0; k <= j - r; ++k) {
                const double c = std::exp(std::lgamma(r + k) - std::lgamma(k + 1.0) - std::lgamma(double(r)));
                s1 += c * n1.cdf(k);
                s2 += c * n2.cdf(k);
            }
            if (s1 > 0) ratio.push_back(s2 / s1);
        }
        bool inc = true;
        for (std::size_t i = 1; i < ratio.size(); ++i) inc &= ratio[i] >= ratio[i - 1] - 1e-12;
        EXPECT_EQ(poisson_shock_precondition(n1, n2, r, 40).verdict.is_increasing_weakly(), inc) << r;
    }
}

TEST(RandomMaxima, CdfExamples) {
    const RandomMaxima two{unif(1), CountLaw::deterministic(2)};
    EXPECT_NEAR(random_maxima_cdf(two, 0.5), 0.25, 1e-15);
    const RandomMaxima geo{unif(1), CountLaw::geometric(0.5)};
    EXPECT_NEAR(random_maxima_cdf(geo, 0.5), 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(random_maxima_cdf(geo, 1.0), 1.0, 1e-12);
    for (double t : {0.1, 0.7, 0.95}) EXPECT_NEAR(random_maxima_cdf(geo, t), 0.5 * t / (1 - 0.5 * t), 1e-12);
}

TEST(RandomMaxima, OrderExamples) {
    const auto u = unif(1);
    const auto w = make_weight("half-square");
    const RandomMaxima a{u, CountLaw::deterministic(1)}, b{u, CountLaw::deterministic(2)};
    const Grid g = default_order_grid(random_maxima(a), random_maxima(b));
    const auto r = random_maxima_order_check(a, b, w, g);
    EXPECT_TRUE(r.antecedent_holds);
    EXPECT_FALSE(r.violation);
    ASSERT_FALSE(r.order_consequents.empty());
    EXPECT_TRUE(r.order_consequents.front().holds());
    EXPECT_FALSE(random_maxima_order_check(a, a, w, g).violation);

    const RandomMaxima g2{u, CountLaw::geometric(0.5)}, g4{u, CountLaw::geometric(0.25)};
    const auto gg = random_maxima_order_check(g2, g4, w, default_order_grid(random_maxima(g2), random_maxima(g4)));
    EXPECT_EQ(gg.antecedent_holds, discrete_order_check("hr", g2.size, g4.size).satisfied());
    EXPECT_FALSE(gg.violation);

    EXPECT_THROW(random_maxima_order_check(a, b, make_weight("odds-of", u), g), PreconditionViolation);
}

TEST(Renewal, FunctionExamples) {
    EXPECT_NEAR(renewal_function({expo(1), 2.0, 0.0}, 2.0), 2.0, 1e-3);
    EXPECT_NEAR(renewal_function({erlang2(2), 1.0, 0.0}, 1.0), erlang2_renewal(2, 1.0), 1e-3);
    EXPECT_NEAR(renewal_function({erlang2(2), 1.0, 0.0}, 1.0), 0.754579, 1e-3);
    EXPECT_NEAR(renewal_function({expo(1), 2.0, 0.0}, 0.0), 0.0, 1e-15);
    const RenewalSolution sol({expo(1), 2.0, 0.0});
    EXPECT_THROW(sol.renewal_function(2.5), DomainError);
    EXPECT_THROW(RenewalSolution({expo(1), -1.0, 0.0}), DomainError);
}

TEST(Renewal, ErlangClosedFormSweep) {
    const RenewalSolution sol({erlang2(1), 10.0, 0.0});
    for (double t : {0.25, 1.0, 3.0, 7.5, 10.0}) {
        EXPECT_NEAR(sol.renewal_function(t), erlang2_renewal(1, t), 1e-3) << t;
        EXPECT_LE(sol.error_estimate(t), 1e-3);
    }
}

TEST(Renewal, ExcessExamples) {
    const RenewalModel m{expo(1), 3.0, 0.0};
    EXPECT_NEAR(excess_lifetime_cdf(m, 1.0, 1.0), 1 - std::exp(-1.0), 1e-3);
    const RenewalSolution sol({erlang2(1), 4.0, 0.0});
    for (double x : {0.2, 1.0, 3.0}) EXPECT_NEAR(sol.excess_cdf(0.0, x), erlang2(1).cdf(x), 1e-12);
    EXPECT_NEAR(sol.excess_cdf(2.0, 0.0), 0.0, 1e-9);
}

TEST(Renewal, ElementaryRenewalAndStationaryExcess) {
    const auto d = erlang2(1);
    const double mu = 2.0, t = 50 * mu;
    const RenewalSolution sol({d, t, 0.0});
    EXPECT_NEAR(sol.renewal_function(t) / t, 1 / mu, 0.05 / mu);
    for (double x : {0.5, 1.0, 2.0, 4.0}) {
        const double stationary = oracle::tanh_sinh([&](double u) { return d.sf(u); }, 0.0, x) / mu;
        EXPECT_NEAR(sol.excess_cdf(t, x), stationary, 1e-2) << x;
    }
}

TEST(Renewal, SerialAndParallelIdentical) {
    const auto d = make_parametric("weibull", {{"shape", 1.5}, {"scale", 1}});
    const auto a = solve_renewal(d, 0.004, 12.0, kernels::Exec::serial);
    const auto b = solve_renewal(d, 0.004, 12.0, kernels::Exec::parallel);
    EXPECT_EQ(a, b);
}

TEST(ExcessOrder, Examples) {
    const auto w = make_weight("power", std::nullopt, 2.0);
    {
        const RenewalSolution sol({expo(1), 3.0, 0.0});
        const auto gt = sol.excess_law(1.0);
        const auto r = excess_wmit_order_check(sol, w, 1.0, default_order_grid(gt, expo(1)));
        EXPECT_TRUE(r.antecedent_holds);
        EXPECT_FALSE(r.violation);
    }
    {
        const RenewalSolution sol({erlang2(2), 3.0, 0.0});
        for (double t : {0.5, 1.0, 2.0}) {
            const auto gt = sol.excess_law(t);
            const auto r = excess_wmit_order_check(sol, w, t, default_order_grid(gt, erlang2(2)));
            EXPECT_FALSE(r.violation) << t;
        }
    }
    {
        const auto dfr = make_parametric("weibull", {{"shape", 0.5}, {"scale", 1}});
        const RenewalSolution sol({dfr, 3.0, 0.0});
        const auto gt = sol.excess_law(1.0);
        const auto r = excess_wmit_order_check(sol, w, 1.0, default_order_grid(gt, dfr));
        EXPECT_FALSE(r.antecedent_holds);
        EXPECT_FALSE(r.violation);
    }
}

TEST(ResidualLaw, Memoryless) {
    const auto r = residual_law(expo(2), 1.5);
    for (double x : {0.1, 1.0, 3.0}) EXPECT_NEAR(r.cdf(x), expo(2).cdf(x), 1e-12);
}
