#include "wmit/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include "wmit/applied.hpp"
#include "wmit/errors.hpp"
#include "wmit/inactivity.hpp"
#include "wmit/infomeasures.hpp"
#include "wmit/orders.hpp"
#include "wmit/records.hpp"
#include "wmit/spread.hpp"

namespace wmit {

namespace {

// Accumulates comparisons for one criterion.
class Ledger {
  public:
    explicit Ledger(CriterionResult& r) : r_(r) {}

    void near(const std::string& what, double got, double want, double tol) {
        const bool ok = std::abs(got - want) <= tol;
        add(ok, what, got, want, "abs tol " + num(tol));
    }
    void rel(const std::string& what, double got, double want, double tol) {
        const bool ok = std::abs(got - want) <= tol * std::abs(want);
        add(ok, what, got, want, "rel tol " + num(tol));
    }
    void within_se(const std::string& what, const IdentityCheck& c, double k) {
        const bool ok = c.within(k);
        std::ostringstream os;
        os << (ok ? "ok   " : "FAIL ") << what << ": est " << num(c.estimate) << " target " << num(c.target)
           << " se " << num(c.std_error) << " z " << num(c.residual);
        push(ok, os.str());
    }
    void flag(const std::string& what, bool ok) { push(ok, std::string(ok ? "ok   " : "FAIL ") + what); }

  private:
    static std::string num(double v) {
        std::ostringstream os;
        os << std::setprecision(10) << v;
        return os.str();
    }
    void add(bool ok, const std::string& what, double got, double want, const std::string& tol) {
        push(ok, std::string(ok ? "ok   " : "FAIL ") + what + ": got " + num(got) + " want " + num(want) + " (" + tol +
                     ")");
    }
    void push(bool ok, std::string line) {
        r_.checks.push_back(std::move(line));
        r_.passed = r_.passed && ok;
    }
    CriterionResult& r_;
};

Distribution law(const std::string& family, std::map<std::string, double> p = {}) {
    return make_parametric(family, p);
}

void c1(Ledger& L, std::uint64_t) {
    const auto id = make_weight("identity");
    for (double b : {1.0, 2.5}) {
        const auto d = law("uniform", {{"b", b}});
        const std::string tag = "b=" + std::to_string(b).substr(0, 3);
        L.near(tag + " Var via E[wmit^2]", variance_of_weighted(d, id).via_wmit, b * b / 12.0, 1e-6);
        L.near(tag + " Var quantile route", quantile_variance(d, id), b * b / 12.0, 1e-6);
        for (int n = 1; n <= 5; ++n) {
            const double want = b / std::pow(2.0, n + 1);
            L.near(tag + " CE_" + std::to_string(n) + " quadrature", gce(d, n), want, 1e-6);
            L.near(tag + " CE_" + std::to_string(n) + " quantile route", quantile_gce(d, id, n), want, 1e-6);
        }
    }
}

void c2(Ledger& L, std::uint64_t) {
    const auto u = law("uniform");
    const auto w = make_weight("cdf-of", u);
    for (unsigned m = 1; m <= 5; ++m) {
        const auto mx = order_statistic_law(u, m, m);
        const double want = m / ((m + 1.0) * (m + 1.0) * (m + 2.0));
        L.near("m=" + std::to_string(m), variance_of_weighted(mx, w).via_wmit, want, 1e-6);
    }
}

void c3(Ledger& L, std::uint64_t) {
    const auto u = law("uniform");
    const auto w = make_weight("cdf-of", u);
    const unsigned n = 5;
    for (unsigned i = 1; i <= n; ++i) {
        // Var of Beta(i, n - i + 1).
        const double a = i;
        const double b = n - i + 1.0;
        const double want = a * b / ((a + b) * (a + b) * (a + b + 1.0));
        L.near("i=" + std::to_string(i), variance_of_weighted(order_statistic_law(u, i, n), w).via_wmit, want, 1e-6);
    }
}

void c4(Ledger& L, std::uint64_t seed) {
    for (double rate : {1.0, 2.5}) {
        const auto d = law("exponential", {{"rate", rate}});
        const std::string tag = "exp(" + std::to_string(rate).substr(0, 3) + ")";
        const auto v = varentropy(d);
        L.near(tag + " direct", v.direct, 1.0, 1e-4);
        L.near(tag + " residual route", v.via_residual, 1.0, 1e-4);
        L.near(tag + " past route", v.via_past, 1.0, 1e-4);
        const auto mc = varentropy_monte_carlo(d, 1'000'000, seed);
        L.near(tag + " Monte Carlo (1e6)", mc.value, 1.0, 0.01);
    }
    const auto v = varentropy(law("uniform", {{"b", 3.0}}));
    L.near("uniform direct", v.direct, 0.0, 1e-8);
    L.near("uniform residual route", v.via_residual, 0.0, 1e-8);
    L.near("uniform past route", v.via_past, 0.0, 1e-8);
}

void c5(Ledger& L, std::uint64_t) {
    const auto d = law("exponential");
    // sum_{k>=2} 1/k^2, with the Euler-Maclaurin tail beyond K.
    double series = 0.0;
    const int K = 100000;
    for (int k = K; k >= 2; --k) series += 1.0 / (static_cast<double>(k) * k);
    series += 1.0 / K - 0.5 / (static_cast<double>(K) * K) + 1.0 / (6.0 * K * K * static_cast<double>(K));
    L.near("series oracle vs pi^2/6 - 1", series, std::numbers::pi * std::numbers::pi / 6.0 - 1.0, 1e-12);
    L.near("-int F log F", cumulative_entropy(d), series, 1e-6);
    L.near("E[mit(X)]", cumulative_entropy_via_mit(d), series, 1e-6);
}

std::vector<std::pair<std::string, Distribution>> matrix_laws() {
    return {{"uniform", law("uniform")},
            {"exponential", law("exponential")},
            {"weibull(2)", law("weibull", {{"shape", 2.0}})},
            {"power(a=2)", law("power", {{"a", 2.0}})},
            {"erlang-2", law("erlang", {{"k", 2.0}})}};
}

std::vector<std::pair<std::string, WeightFn>> matrix_weights(const Distribution& d) {
    return {{"identity", make_weight("identity")},
            {"power r=2", make_weight("power", std::nullopt, 2.0)},
            {"cdf-of-self", make_weight("cdf-of", d)}};
}

void c6(Ledger& L, std::uint64_t) {
    for (const auto& [dn, d] : matrix_laws()) {
        for (const auto& [wn, w] : matrix_weights(d)) {
            const auto v = variance_of_weighted(d, w);
            L.rel(dn + " x " + wn, v.via_wmit, v.direct, 1e-4);
        }
    }
}

void c7(Ledger& L, std::uint64_t seed) {
    const std::size_t N = 100000;
    std::uint64_t s = seed;
    for (const auto& [dn, d] : {std::pair{"uniform", law("uniform")}, std::pair{"exponential", law("exponential")}}) {
        for (const auto& wk : {"identity", "half-square"}) {
            const auto w = make_weight(wk);
            for (int n = 1; n <= 2; ++n) {
                const std::string tag = std::string(dn) + " " + wk + " n=" + std::to_string(n);
                L.within_se(tag + " E[wmit(X_n)]", rit_identity_check(d, w, n, N, ++s), 3.0);
                const auto cov = cov_identity_check(d, w, n, N, ++s);
                L.within_se(tag + " E[phi T/tau]/n", cov.tau_form, 3.0);
                L.within_se(tag + " Cov[psi,T]/n", cov.cov_form, 3.0);
            }
        }
    }
}

void c8(Ledger& L, std::uint64_t) {
    for (const auto& [dn, d] : {std::pair{"uniform", law("uniform")}, std::pair{"exponential", law("exponential")}}) {
        for (const auto& wk : {"identity", "half-square"}) {
            const auto r = gce_recurrence_check(d, make_weight(wk), 2);
            const std::string tag = std::string(dn) + " " + wk;
            L.near(tag + " route (i)", r.residual_i, 0.0, 1e-5);
            L.near(tag + " route (ii), Z density", r.residual_ii, 0.0, 1e-5);
        }
    }
}

void c9(Ledger& L, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto in = [&](double lo, double hi) { return lo + (hi - lo) * U(rng); };
    auto random_law = [&](int fam) {
        switch (fam) {
            case 0: return law("exponential", {{"rate", in(0.5, 3.0)}});
            case 1: return law("weibull", {{"shape", in(0.5, 3.0)}, {"scale", in(0.5, 2.0)}});
            default: return law("power", {{"a", in(0.5, 3.0)}, {"b", in(0.5, 2.0)}});
        }
    };
    std::size_t violations = 0;
    std::size_t antecedents = 0;
    for (int pair = 0; pair < 50; ++pair) {
        const int fam = static_cast<int>(rng() % 3);
        const auto x = random_law(fam);
        const auto y = random_law(fam);
        const auto grid = default_order_grid(x, y, seed + pair);
        for (const auto& w : {make_weight("identity"), make_weight("power", std::nullopt, 2.0)}) {
            const auto rep = implication_suite(x, y, w, grid);
            for (const auto& r : rep.results) {
                antecedents += r.antecedent_holds;
                if (r.violation) {
                    ++violations;
                    L.flag("violation: " + r.theorem + " for " + x.name() + " vs " + y.name() + " weight " + w.kind(),
                           false);
                }
            }
        }
    }
    L.flag("300 implication checks, " + std::to_string(antecedents) + " with antecedent satisfied, " +
               std::to_string(violations) + " violations",
           violations == 0);
}

void c10(Ledger& L, std::uint64_t) {
    for (const auto& [dn, d] : matrix_laws()) {
        for (const auto& [wn, w] : matrix_weights(d)) {
            for (int n = 1; n <= 3; ++n) {
                const auto rep = bound_suite(d, w, n);
                for (const auto& c : rep.checks) {
                    if (!c.applicable) continue;
                    std::ostringstream os;
                    os << dn << " x " << wn << " n=" << n << " " << c.name << ": " << std::setprecision(8) << c.lhs
                       << " <= " << c.rhs;
                    L.flag(os.str(), c.holds());
                }
            }
        }
    }
}

void c11(Ledger& L, std::uint64_t) {
    for (double rate : {1.0, 2.0}) {
        const auto d = law("exponential", {{"rate", rate}});
        const RenewalSolution sol(RenewalModel{d, 20.0, 0.0});
        for (double t : {1.0, 5.0, 20.0}) {
            L.near("Poisson(" + std::to_string(rate).substr(0, 3) + ") M(" + std::to_string(t).substr(0, 4) + ")",
                   sol.renewal_function(t), rate * t, 1e-3);
        }
        for (double t : {1.0, 5.0}) {
            for (double x : {0.5, 1.0, 2.0}) {
                L.near("gamma(" + std::to_string(t).substr(0, 3) + ") cdf at " + std::to_string(x).substr(0, 3),
                       sol.excess_cdf(t, x), 1.0 - std::exp(-rate * x), 1e-3);
            }
        }
    }
    const auto shock = make_shock_model(law("exponential"), CountLaw::geometric(0.5));
    L.near("geometric shock F_T(1)", shock_lifetime_cdf(shock, 1.0), 1.0 - std::exp(-0.5), 1e-3);

    const RenewalSolution e2(RenewalModel{law("erlang", {{"k", 2.0}, {"rate", 2.0}}), 3.0, 0.0});
    for (double t : {0.5, 1.0, 2.0}) {
        // Erlang(2, lambda): M(t) = lambda t/2 - 1/4 + exp(-2 lambda t)/4.
        const double want = t - 0.25 + 0.25 * std::exp(-4.0 * t);
        L.near("Erlang-2 M(" + std::to_string(t).substr(0, 3) + ")", e2.renewal_function(t), want, 1e-3);
    }

    const auto n1 = CountLaw::deterministic(1);
    const auto n2 = CountLaw::geometric(0.5);
    const auto t1 = shock_lifetime(make_shock_model(law("exponential"), n1));
    const auto t2 = shock_lifetime(make_shock_model(law("exponential"), n2));
    const auto grid = default_order_grid(t1, t2, 11);
    for (unsigned r : {1u, 2u}) {
        const auto pre = poisson_shock_precondition(n1, n2, r, 50);
        const auto v = check_order("wmit", t1, t2, make_weight("power", std::nullopt, static_cast<double>(r)), grid);
        const bool pre_inc = pre.verdict.is_increasing_weakly();
        L.flag("r=" + std::to_string(r) + " precondition " + to_string(pre.verdict.kind) + ", direct wmit " +
                   to_string(v.kind),
               pre_inc && v.satisfied());
    }
}

void c12(Ledger& L, std::uint64_t) {
    const auto a = auc(law("exponential"), law("exponential", {{"rate", 2.0}}));
    L.near("AUC exp(1) vs exp(2)", a.auc, 2.0 / 3.0, 1e-6);
    L.near("route agreement wmrl vs limit", a.residuals[0], 0.0, 1e-6);
    L.near("route agreement wmrl vs direct", a.residuals[1], 0.0, 1e-6);
    L.near("route agreement limit vs direct", a.residuals[2], 0.0, 1e-6);
    const auto same = auc(law("exponential"), law("exponential"));
    L.near("identical pair", same.auc, 0.5, 1e-9);
    L.near("identical pair route spread", std::max({same.residuals[0], same.residuals[1], same.residuals[2]}), 0.0,
           1e-9);
}

struct Criterion {
    int id;
    const char* title;
    std::optional<double> limit;
    std::function<void(Ledger&, std::uint64_t)> body;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all{
        {1, "uniform(0,b): variance and CE_n, two routes each", 5.0, c1},
        {2, "parallel system: variance of F(X_{m:m}), m = 1..5", std::nullopt, c2},
        {3, "order statistics i:5: variance of F(X_{i:5})", std::nullopt, c3},
        {4, "varentropy: exponential = 1 (3 routes + MC), uniform = 0", 30.0, c4},
        {5, "cumulative entropy of exponential(1)", std::nullopt, c5},
        {6, "variance identity on the 5 x 3 matrix", std::nullopt, c6},
        {7, "record identities within 3 SE at 1e5 draws", 60.0, c7},
        {8, "recurrence residuals at n = 2", std::nullopt, c8},
        {9, "implication suites on 50 random pairs", 120.0, c9},
        {10, "bound suite on the 5 x 3 matrix, n = 1..3", std::nullopt, c10},
        {11, "applied layer: renewal, excess, shock", std::nullopt, c11},
        {12, "AUC three-route agreement", std::nullopt, c12},
    };
    return all;
}

}  // namespace

std::string result_line(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.passed ? "PASS" : "FAIL") << "  [" << std::setw(2) << r.id << "] " << r.title << "  (" << std::fixed
       << std::setprecision(2) << r.seconds << " s";
    if (r.limit_seconds) os << " / limit " << std::setprecision(0) << *r.limit_seconds << " s";
    os << ")";
    if (!r.error.empty()) os << "  error: " << r.error;
    return os.str();
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
    std::vector<CriterionResult> out;
    for (const auto& c : criteria()) {
        if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), c.id) == opt.only.end()) continue;
        CriterionResult r;
        r.id = c.id;
        r.title = c.title;
        r.limit_seconds = c.limit;
        r.passed = true;
        Ledger L(r);
        const auto start = std::chrono::steady_clock::now();
        try {
            c.body(L, opt.seed);
        } catch (const std::exception& e) {
            r.passed = false;
            r.error = e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.limit && r.seconds > *c.limit) {
            r.passed = false;
            r.checks.push_back("FAIL runtime over the limit");
        }
        if (opt.progress) *opt.progress << result_line(r) << std::endl;
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace wmit
