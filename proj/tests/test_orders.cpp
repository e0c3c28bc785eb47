#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "wmit/distribution.hpp"
#include "wmit/errors.hpp"
#include "wmit/orders.hpp"
#include "wmit/weights.hpp"

using namespace wmit;

namespace {
Distribution expo(double rate) { return make_parametric("exponential", {{"rate", rate}}); }
Distribution unif(double b) { return make_parametric("uniform", {{"b", b}}); }

OrderVerdict check(const std::string& kind, const Distribution& x, const Distribution& y,
                   const std::optional<WeightFn>& w = std::nullopt) {
    return check_order(kind, x, y, w, default_order_grid(x, y));
}

Distribution random_law(oracle::Gen& g) {
    switch (g.integer(0, 2)) {
        case 0: return make_parametric("exponential", {{"rate", g.uniform(0.5, 3)}});
        case 1: return make_parametric("weibull", {{"shape", g.uniform(0.5, 3)}, {"scale", g.uniform(0.5, 2)}});
        default: return make_parametric("power", {{"a", g.uniform(0.5, 3)}, {"b", g.uniform(0.5, 2)}});
    }
}
}  // namespace

TEST(CheckOrder, Examples) {
    EXPECT_TRUE(check("rhr", expo(2), expo(1)).holds());
    EXPECT_TRUE(check("disp", expo(2), expo(1)).holds());
    for (const auto& w : {make_weight("identity"), make_weight("power", std::nullopt, 2.0),
                          make_weight("cdf-of", expo(1))}) {
        const auto v = check("wmit", unif(1), unif(1), w);
        EXPECT_TRUE(v.holds());
        EXPECT_EQ(v.margin, 0.0);
    }
    EXPECT_TRUE(check("lir", unif(1), unif(2)).holds());
}

TEST(CheckOrder, ReversedPairsFailWithWitness) {
    for (const std::string kind : {"st", "hr", "rhr", "mit", "disp", "lir"}) {
        const auto v = check(kind, expo(1), expo(3));
        EXPECT_TRUE(v.fails()) << kind;
        ASSERT_TRUE(v.witness.has_value()) << kind;
        EXPECT_GT(v.witness->lhs, v.witness->rhs + v.margin) << kind;
    }
}

TEST(CheckOrder, ConfigErrors) {
    EXPECT_THROW(check("lr", expo(1), expo(2)), ConfigError);
    EXPECT_THROW(check("wmit", expo(1), expo(2)), ConfigError);
}

TEST(CheckOrder, SmitIsWmitWithLinearPhi) {
    oracle::Gen g(8);
    for (int rep = 0; rep < 10; ++rep) {
        const auto x = random_law(g), y = random_law(g);
        const Grid grid = default_order_grid(x, y);
        const auto a = check_order("smit", x, y, std::nullopt, grid);
        const auto b = check_order("wmit", x, y, make_weight("half-square"), grid);
        EXPECT_EQ(a.kind, b.kind) << x.name() << " vs " << y.name();
        EXPECT_EQ(a.margin, b.margin);
    }
}

TEST(CheckOrder, SerialAndParallelAgree) {
    const auto x = make_parametric("weibull", {{"shape", 1.7}, {"scale", 1}}), y = expo(1.2);
    const Grid grid = default_order_grid(x, y);
    OrderOptions ser;
    ser.exec = kernels::Exec::serial;
    for (const auto& kind : order_kinds()) {
        std::optional<WeightFn> w;
        if (kind == "wmit") w = make_weight("power", std::nullopt, 2.0);
        const auto a = check_order(kind, x, y, w, grid, ser);
        const auto b = check_order(kind, x, y, w, grid);
        EXPECT_EQ(a.kind, b.kind) << kind;
        EXPECT_EQ(a.margin, b.margin) << kind;
        EXPECT_EQ(a.witness.has_value(), b.witness.has_value()) << kind;
    }
}

TEST(OrderProperties, ReflexivityAndAntisymmetry) {
    oracle::Gen g(2718);
    for (int rep = 0; rep < 12; ++rep) {
        const auto x = random_law(g), y = random_law(g);
        const auto w = make_weight("power", std::nullopt, 2.0);
        for (const auto& kind : order_kinds()) {
            std::optional<WeightFn> wk;
            if (kind == "wmit") wk = w;
            EXPECT_FALSE(check(kind, x, x, wk).fails()) << kind << " " << x.name();
            const auto fwd = check(kind, x, y, wk);
            if (fwd.holds() && fwd.margin > 0 && !x.same_law(y)) {
                EXPECT_FALSE(check(kind, y, x, wk).holds()) << kind << " " << x.name() << " vs " << y.name();
            }
        }
    }
}

TEST(OrderProperties, NoTheoremViolationOnRandomPairs) {
    oracle::Gen g(314159);
    std::size_t active = 0;
    for (int rep = 0; rep < 25; ++rep) {
        const auto x = random_law(g), y = random_law(g);
        const auto w = g.integer(0, 1) ? make_weight("identity") : make_weight("power", std::nullopt, 2.0);
        const auto rep_ = implication_suite(x, y, w, default_order_grid(x, y));
        EXPECT_FALSE(rep_.any_violation()) << x.name() << " vs " << y.name() << " " << w.kind();
        for (const auto& r : rep_.results) active += r.antecedent_holds;
    }
    EXPECT_GT(active, 0u);
}

TEST(ImplicationSuite, Examples) {
    const auto x = expo(2), y = expo(1);
    const auto rep = implication_suite(x, y, make_weight("power", std::nullopt, 2.0), default_order_grid(x, y));
    EXPECT_FALSE(rep.any_violation());
    std::size_t with_antecedent = 0;
    for (const auto& r : rep.results) {
        if (!r.antecedent_holds) continue;
        ++with_antecedent;
        for (const auto& c : r.order_consequents) EXPECT_TRUE(c.holds()) << r.theorem << " " << c.order;
    }
    EXPECT_GE(with_antecedent, 2u);

    const auto u1 = unif(1), u2 = unif(2);
    const auto lir = implication_suite(u1, u2, make_weight("identity"), default_order_grid(u1, u2));
    bool saw_var = false;
    for (const auto& r : lir.results) {
        for (const auto& s : r.scalar_consequents) {
            EXPECT_TRUE(s.holds()) << s.name;
            if (r.antecedent_holds && std::abs(s.lhs - 1.0 / 12.0) < 1e-8 && std::abs(s.rhs - 4.0 / 12.0) < 1e-8)
                saw_var = true;
        }
    }
    EXPECT_TRUE(saw_var);
}

TEST(ImplicationSuite, FinalizeFlagsOnlyRefutedConsequents) {
    ImplicationResult r;
    OrderVerdict ok;
    ok.kind = VerdictKind::holds;
    OrderVerdict bad;
    bad.kind = VerdictKind::fails;
    r.antecedents = {ok};
    r.order_consequents = {ok};
    finalize(r);
    EXPECT_TRUE(r.antecedent_holds);
    EXPECT_FALSE(r.violation);
    r.order_consequents = {bad};
    finalize(r);
    EXPECT_TRUE(r.violation);
    r.antecedents = {bad};
    finalize(r);
    EXPECT_FALSE(r.antecedent_holds);
    EXPECT_FALSE(r.violation);
}

TEST(CountLawTest, Construction) {
    const auto g = CountLaw::geometric(0.5);
    EXPECT_EQ(g.pmf(0), 0.0);
    EXPECT_NEAR(g.pmf(3), 0.125, 1e-15);
    double total = 0;
    for (double p : g.masses()) total += p;
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_NEAR(g.cdf(2), 0.75, 1e-15);
    EXPECT_NEAR(g.at_least(3), 0.25, 1e-12);
    EXPECT_EQ(CountLaw::deterministic(2).cdf(1), 0.0);
    EXPECT_EQ(CountLaw::deterministic(2).cdf(2), 1.0);
    EXPECT_THROW(CountLaw::from_pmf({0.2, 0.2}), ConfigError);
    EXPECT_THROW(CountLaw::from_pmf({-0.2, 1.2}), ConfigError);
}

TEST(DiscreteOrder, Examples) {
    const auto one = CountLaw::deterministic(1), geo = CountLaw::geometric(0.5);
    EXPECT_TRUE(discrete_order_check("rhr", one, geo).holds());
    const auto same = discrete_order_check("rhr", geo, geo);
    EXPECT_TRUE(same.holds());
    EXPECT_EQ(same.margin, 0.0);
    const auto rev = discrete_order_check("rhr", geo, one);
    EXPECT_TRUE(rev.fails());
    ASSERT_TRUE(rev.witness.has_value());
    EXPECT_THROW(discrete_order_check("st", one, geo), ConfigError);
}

TEST(DiscreteOrder, RhrAgreesWithBruteForce) {
    // P2(k)/P1(k) increasing in k, evaluated directly over k <= 60
    const auto a = CountLaw::geometric(0.5), b = CountLaw::geometric(0.25), c = CountLaw::from_pmf({0, 0.2, 0.5, 0.3});
    const std::vector<std::pair<CountLaw, CountLaw>> pairs = {{a, b}, {b, a}, {c, a}, {a, c}, {c, b}, {b, c}};
    for (const auto& [n1, n2] : pairs) {
        bool increasing = true;
        double prev = 0.0;
        for (unsigned k = 1; k <= 60; ++k) {
            if (n1.cdf(k) <= 0) continue;
            const double r = n2.cdf(k) / n1.cdf(k);
            if (r < prev - 1e-12) increasing = false;
            prev = r;
        }
        const auto v = discrete_order_check("rhr", n1, n2);
        EXPECT_EQ(v.holds(), increasing) << n1.name() << " vs " << n2.name();
        bool hr_increasing = true;
        prev = 0.0;
        for (unsigned k = 1; k <= 60; ++k) {
            if (n1.at_least(k) <= 1e-13) break;
            const double r = n2.at_least(k) / n1.at_least(k);
            if (r < prev - 1e-9 * r) hr_increasing = false;
            prev = r;
        }
        EXPECT_EQ(discrete_order_check("hr", n1, n2).holds(), hr_increasing) << n1.name() << " vs " << n2.name();
    }
}
