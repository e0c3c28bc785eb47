#include "wmit/applied.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wmit/errors.hpp"
#include "wmit/inactivity.hpp"

namespace wmit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_binom(unsigned n, unsigned k) { return log_factorial(n) - log_factorial(k) - log_factorial(n - k); }

double poisson_mass(unsigned k, double L) { return std::exp(log_poisson_weight(k, L) - L); }

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

Distribution order_statistic_law(const Distribution& base, unsigned i, unsigned n) {
    if (n < 1 || n > 1000 || i < 1 || i > n) throw DomainError("order statistic needs 1 <= i <= n <= 1000", i);
    auto cdf = [base, i, n](double x) {
        const double F = base.cdf(x);
        const double S = base.sf(x);
        if (F <= 0.0) return 0.0;
        if (S <= 0.0) return 1.0;
        // Sum the shorter tail of the binomial(n, F) law.
        const double lF = std::log(F);
        const double lS = std::log(S);
        double upper = 0.0;
        double lower = 0.0;
        for (unsigned j = 0; j <= n; ++j) {
            const double term = std::exp(log_binom(n, j) + j * lF + (n - j) * lS);
            (j >= i ? upper : lower) += term;
        }
        return upper <= 0.5 ? upper : 1.0 - lower;
    };
    std::function<double(double)> pdf;
    if (base.has_pdf()) {
        pdf = [base, i, n](double x) {
            const double f = base.pdf(x);
            const double F = base.cdf(x);
            const double S = base.sf(x);
            if (!(f > 0.0)) return 0.0;
            if ((F <= 0.0 && i > 1) || (S <= 0.0 && i < n)) return 0.0;
            const double lc = log_factorial(n) - log_factorial(i - 1) - log_factorial(n - i);
            const double a = i > 1 ? (i - 1) * std::log(F) : 0.0;
            const double b = i < n ? (n - i) * std::log(S) : 0.0;
            return f * std::exp(lc + a + b);
        };
    }
    std::ostringstream os;
    os << "order(" << base.name() << "," << i << ":" << n << ")";
    return Distribution::from_functions(os.str(), cdf, base.support(), pdf);
}

// ---------------------------------------------------------------- shocks

ShockModel make_shock_model(const Distribution& interarrival, const CountLaw& survived,
                            std::function<double(double)> cum_intensity) {
    if (survived.pmf(0) > 0.0) throw ConfigError("shock model: P(N = 0) must be 0");
    const bool custom = static_cast<bool>(cum_intensity);
    if (!custom) {
        cum_intensity = [interarrival](double t) {
            const double s = interarrival.sf(t);
            return s > 0.0 ? -std::log(s) : kInf;
        };
    } else if (std::abs(cum_intensity(0.0)) > 1e-12) {
        throw ConfigError("shock model: cumulative intensity must vanish at 0");
    }
    return ShockModel{interarrival, survived, std::move(cum_intensity), custom};
}

double shock_lifetime_cdf(const ShockModel& m, double t) {
    const double L = m.cum_intensity(t);
    if (!(L > 0.0)) return 0.0;
    if (!std::isfinite(L)) return 1.0;
    const unsigned K = m.survived.max_k();
    double acc = 0.0;
    double seen = 0.0;
    for (unsigned k = 0; k <= K; ++k) {
        const double p = poisson_mass(k, L);
        acc += m.survived.cdf(k) * p;
        seen += p;
    }
    return std::clamp(acc + std::max(0.0, 1.0 - seen), 0.0, 1.0);
}

double shock_lifetime_sf(const ShockModel& m, double t) {
    const double L = m.cum_intensity(t);
    if (!(L > 0.0)) return 1.0;
    if (!std::isfinite(L)) return 0.0;
    double acc = 0.0;
    for (unsigned k = 0; k <= m.survived.max_k(); ++k) acc += m.survived.at_least(k + 1) * poisson_mass(k, L);
    return std::clamp(acc, 0.0, 1.0);
}

Distribution shock_lifetime(const ShockModel& m) {
    std::function<double(double)> pdf;
    if (m.interarrival.has_pdf()) {
        pdf = [m](double t) {
            const double s = m.interarrival.sf(t);
            const double L = m.cum_intensity(t);
            if (!(s > 0.0) || !(L >= 0.0)) return 0.0;
            double dL = m.interarrival.pdf(t) / s;
            if (m.custom_intensity) {
                const double h = 1e-6 * std::max(1.0, t);
                const double a = std::max(0.0, t - h);
                dL = (m.cum_intensity(t + h) - m.cum_intensity(a)) / (t + h - a);
            }
            double acc = 0.0;
            for (unsigned k = 0; k < m.survived.max_k(); ++k) acc += poisson_mass(k, L) * m.survived.pmf(k + 1);
            return dL * acc;
        };
    }
    auto cdf = [m](double t) { return shock_lifetime_cdf(m, t); };
    return Distribution::from_functions("shock(" + m.interarrival.name() + "," + m.survived.name() + ")", cdf,
                                        m.interarrival.support(), pdf);
}

std::vector<double> simulate_shock_lifetimes(const ShockModel& m, std::size_t count, std::uint64_t seed,
                                             kernels::Exec exec) {
    const auto& N = m.survived;
    auto inverse_intensity = [&](double g) {
        // Default intensity: F(T) = 1 - e^-g.
        if (!m.custom_intensity) return m.interarrival.isf(std::exp(-g));
        double lo = 0.0;
        double hi = 1.0;
        while (m.cum_intensity(hi) < g) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e300) throw NumericalError("shock simulation: cumulative intensity is bounded", hi);
        }
        for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (m.cum_intensity(mid) < g ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    auto draw = [&](std::mt19937_64& rng) {
        const double u = kernels::uniform_open(rng);
        unsigned k = 1;
        while (k < N.max_k() && N.cdf(k) < u) ++k;
        double g = 0.0;
        for (unsigned j = 0; j < k; ++j) g -= std::log(kernels::uniform_open(rng));
        return inverse_intensity(g);
    };
    return kernels::draw(count, seed, draw, exec);
}

ImplicationResult shock_order_check(const ShockModel& m1, const ShockModel& m2, const WeightFn& w, const Grid& grid,
                                    const OrderOptions& opt) {
    if (!m1.interarrival.same_law(m2.interarrival)) {
        throw ConfigError("shock_order_check: the two models must share the interarrival law");
    }
    for (double t : grid.points()) {
        const double a = m1.cum_intensity(t);
        const double b = m2.cum_intensity(t);
        if (std::isfinite(a) && std::abs(a - b) > 1e-12 * (1.0 + std::abs(a))) {
            throw ConfigError("shock_order_check: cumulative intensities differ at t = " + fmt(t));
        }
    }
    ImplicationResult r;
    r.theorem = "N1 rhr N2 implies T1 wmit T2";
    r.antecedents.push_back(discrete_order_check("rhr", m1.survived, m2.survived));
    r.order_consequents.push_back(check_order("wmit", shock_lifetime(m1), shock_lifetime(m2), w, grid, opt));
    finalize(r);
    return r;
}

PoissonPrecondition poisson_shock_precondition(const CountLaw& n1, const CountLaw& n2, unsigned r, unsigned jmax) {
    if (r < 1) throw DomainError("poisson_shock_precondition: r must be at least 1", r);
    if (jmax < r) throw DomainError("poisson_shock_precondition: jmax must be at least r", jmax);
    PoissonPrecondition out;
    std::vector<double> js;
    std::vector<double> ratio;
    double s1 = 0.0;
    double s2 = 0.0;
    for (unsigned j = r; j <= jmax; ++j) {
        const unsigned k = j - r;
        const double c = std::exp(log_binom(r + k - 1, k));
        s1 += c * n1.cdf(k);
        s2 += c * n2.cdf(k);
        if (s1 <= 0.0) {
            if (s2 > 0.0 && !out.verdict.witness) {
                // Infinite ratio followed by finite values cannot be increasing.
                out.verdict.kind = Monotonicity::non_monotone;
                out.verdict.witness = std::make_pair(static_cast<double>(j), static_cast<double>(j + 1));
            }
            out.skipped.push_back(j);
            continue;
        }
        js.push_back(j);
        ratio.push_back(s2 / s1);
    }
    if (out.verdict.witness) return out;
    if (js.size() < 3) throw DomainError("poisson_shock_precondition: fewer than 3 usable indices", jmax);
    out.verdict = classify_monotone(Grid::from_points(js), ratio);
    return out;
}

// ---------------------------------------------------------------- random maxima

double random_maxima_cdf(const RandomMaxima& m, double t) {
    if (m.size.pmf(0) > 0.0) throw ConfigError("random maxima: P(N = 0) must be 0");
    const double F = m.component.cdf(t);
    if (F <= 0.0) return 0.0;
    if (F >= 1.0) return 1.0;
    const double lF = std::log(F);
    double acc = 0.0;
    for (unsigned k = 1; k <= m.size.max_k(); ++k) acc += m.size.pmf(k) * std::exp(k * lF);
    return std::min(acc, 1.0);
}

Distribution random_maxima(const RandomMaxima& m) {
    if (m.size.pmf(0) > 0.0) throw ConfigError("random maxima: P(N = 0) must be 0");
    std::function<double(double)> pdf;
    if (m.component.has_pdf()) {
        pdf = [m](double t) {
            const double F = m.component.cdf(t);
            const double f = m.component.pdf(t);
            if (!(f > 0.0)) return 0.0;
            double acc = m.size.pmf(1);
            if (F > 0.0) {
                const double lF = std::log(F);
                for (unsigned k = 2; k <= m.size.max_k(); ++k) acc += k * m.size.pmf(k) * std::exp((k - 1) * lF);
            }
            return acc * f;
        };
    }
    return Distribution::from_functions("maxima(" + m.component.name() + "," + m.size.name() + ")",
                                        [m](double t) { return random_maxima_cdf(m, t); }, m.component.support(), pdf);
}

ImplicationResult random_maxima_order_check(const RandomMaxima& m1, const RandomMaxima& m2, const WeightFn& w,
                                            const Grid& grid, const OrderOptions& opt) {
    if (!m1.component.same_law(m2.component)) {
        throw ConfigError("random_maxima_order_check: the two models must share the component law");
    }
    const auto phi_shape = monotone_on_grid([&](double x) { return w.phi(x); }, grid);
    if (!phi_shape.is_increasing_weakly()) {
        const double at = phi_shape.witness ? phi_shape.witness->first : grid.lo();
        throw PreconditionViolation("random_maxima_order_check: phi is not increasing on the grid", at);
    }
    ImplicationResult r;
    r.theorem = "N1 hr N2 implies max1 wmit max2";
    r.conditions.push_back("phi increasing (grid)");
    r.antecedents.push_back(discrete_order_check("hr", m1.size, m2.size));
    r.order_consequents.push_back(check_order("wmit", random_maxima(m1), random_maxima(m2), w, grid, opt));
    finalize(r);
    return r;
}

// ---------------------------------------------------------------- renewal

namespace {

constexpr std::size_t kBlock = 256;

// Ordered block sums: the partition is fixed, so every exec mode adds in the same order.
template <class Term>
double blocked_sum(std::size_t n, Term&& term, kernels::Exec exec) {
    const std::size_t blocks = (n + kBlock - 1) / kBlock;
    auto block = [&](std::size_t b) {
        double s = 0.0;
        const std::size_t end = std::min(n, (b + 1) * kBlock);
        for (std::size_t j = b * kBlock; j < end; ++j) s += term(j);
        return s;
    };
    const auto parts = kernels::generate(blocks, block, blocks >= 8 ? exec : kernels::Exec::serial);
    double s = 0.0;
    for (double p : parts) s += p;
    return s;
}

// M at t by linear interpolation on nodes of spacing h.
double interp(const std::vector<double>& M, double h, double t) {
    const double pos = t / h;
    const auto i = static_cast<std::size_t>(std::floor(pos));
    if (i + 1 >= M.size()) return M.back();
    const double frac = pos - static_cast<double>(i);
    return M[i] + frac * (M[i + 1] - M[i]);
}

double excess_on(const Distribution& F, const std::vector<double>& M, double h, double t, double x) {
    if (x <= 0.0) return 0.0;
    if (t <= 0.0) return F.cdf(x);
    const auto J = static_cast<std::size_t>(std::floor(t / h + 1e-12));
    double acc = 0.0;
    for (std::size_t j = 1; j <= J && j < M.size(); ++j) {
        acc += F.cdf(t + x - (j - 0.5) * h) * (M[j] - M[j - 1]);
    }
    const double Mt = interp(M, h, t);
    const double tail_start = static_cast<double>(J) * h;
    if (t > tail_start) acc += F.cdf(t + x - 0.5 * (tail_start + t)) * (Mt - M[std::min(J, M.size() - 1)]);
    return std::clamp(F.cdf(t + x) + acc - Mt, 0.0, 1.0);
}

}  // namespace

std::vector<double> solve_renewal(const Distribution& interarrival, double h, double horizon, kernels::Exec exec) {
    if (!(h > 0.0)) throw DomainError("renewal mesh must be positive", h);
    if (!(horizon > 0.0)) throw DomainError("renewal horizon must be positive", horizon);
    const auto n = static_cast<std::size_t>(std::ceil(horizon / h)) + 1;
    // Fn[i] = F(i h); Fm[k] = F((k - 1/2) h).
    std::vector<double> Fn(n + 1);
    std::vector<double> Fm(n + 1, 0.0);
    for (std::size_t i = 0; i <= n; ++i) Fn[i] = interarrival.cdf(static_cast<double>(i) * h);
    for (std::size_t k = 1; k <= n; ++k) Fm[k] = interarrival.cdf((static_cast<double>(k) - 0.5) * h);
    if (Fm[1] >= 1.0) throw NumericalError("renewal mesh coarser than the interarrival support", h);
    std::vector<double> M(n + 1, 0.0);
    std::vector<double> dM(n + 1, 0.0);
    for (std::size_t i = 1; i <= n; ++i) {
        // sum_{j=1}^{i-1} F(i h - (j - 1/2) h) dM_j
        const double s = blocked_sum(i - 1, [&](std::size_t j) { return Fm[i - j] * dM[j + 1]; }, exec);
        M[i] = (Fn[i] + s - Fm[1] * M[i - 1]) / (1.0 - Fm[1]);
        dM[i] = M[i] - M[i - 1];
    }
    return M;
}

RenewalSolution::RenewalSolution(const RenewalModel& model, kernels::Exec exec) : model_(model) {
    if (!(model.horizon > 0.0)) throw DomainError("renewal horizon must be positive", model.horizon);
    if (model.mesh < 0.0) throw DomainError("renewal mesh must be non-negative", model.mesh);
    mean_ = model.interarrival.mean();
    if (!std::isfinite(mean_) || !(mean_ > 0.0)) throw NumericalError("renewal: interarrival mean is not finite", mean_);
    h_ = model.mesh > 0.0 ? model.mesh : mean_ / 200.0;
    coarse_ = solve_renewal(model.interarrival, h_, model.horizon, exec);
    fine_ = solve_renewal(model.interarrival, 0.5 * h_, model.horizon, exec);
}

double RenewalSolution::renewal_function(double t) const {
    if (t < 0.0) throw DomainError("renewal function: t must be non-negative", t);
    if (t > model_.horizon * (1.0 + 1e-12)) throw DomainError("renewal function: t beyond the horizon", t);
    return interp(fine_, 0.5 * h_, t);
}

double RenewalSolution::error_estimate(double t) const {
    return std::abs(interp(coarse_, h_, t) - interp(fine_, 0.5 * h_, t));
}

double RenewalSolution::excess_cdf(double t, double x) const {
    if (t < 0.0 || t > model_.horizon * (1.0 + 1e-12)) throw DomainError("excess lifetime: t outside [0, horizon]", t);
    return excess_on(model_.interarrival, fine_, 0.5 * h_, t, x);
}

Distribution RenewalSolution::excess_law(double t) const {
    if (t < 0.0 || t > model_.horizon * (1.0 + 1e-12)) throw DomainError("excess lifetime: t outside [0, horizon]", t);
    const auto& F = model_.interarrival;
    double err = 2.0 * error_estimate(t);
    for (double p : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        const double x = F.quantile(p);
        err = std::max(err, 2.0 * std::abs(excess_on(F, coarse_, h_, t, x) - excess_on(F, fine_, 0.5 * h_, t, x)));
    }
    err += 1e-12;
    // Shares data with *this by value so the law outlives the solution.
    auto fine = std::make_shared<const std::vector<double>>(fine_);
    const double hf = 0.5 * h_;
    auto cdf = [F, fine, hf, t](double x) { return excess_on(F, *fine, hf, t, x); };
    return Distribution::from_functions("excess(" + F.name() + ",t=" + fmt(t) + ")", cdf, Support{0.0, F.support().upper},
                                        {}, err);
}

double renewal_function(const RenewalModel& m, double t) { return RenewalSolution(m).renewal_function(t); }

double excess_lifetime_cdf(const RenewalModel& m, double t, double x) { return RenewalSolution(m).excess_cdf(t, x); }

Distribution residual_law(const Distribution& d, double s) {
    const double S = d.sf(s);
    if (!(S > 0.0)) throw DomainError("residual law: survival vanishes at s", s);
    const double Fs = d.cdf(s);
    auto cdf = [d, s, S, Fs](double x) {
        if (x <= 0.0) return 0.0;
        const double v = (d.cdf(s + x) - Fs) / S;
        return v < 0.5 ? std::max(v, 0.0) : std::min(1.0, 1.0 - d.sf(s + x) / S);
    };
    std::function<double(double)> pdf;
    if (d.has_pdf()) pdf = [d, s, S](double x) { return x < 0.0 ? 0.0 : d.pdf(s + x) / S; };
    const auto up = d.support().upper;
    return Distribution::from_functions("residual(" + d.name() + ",s=" + fmt(s) + ")", cdf, Support{0.0, up - s}, pdf);
}

ImplicationResult excess_wmit_order_check(const RenewalSolution& sol, const WeightFn& w, double t, const Grid& grid,
                                          const OrderOptions& opt) {
    const auto& X = sol.model().interarrival;
    ImplicationResult r;
    r.theorem = "IWMIT and NBU imply gamma(t) wmit gamma(0)";

    const Grid hyp = quantile_grid(X, 128, 1e-3, 1.0 - 1e-3);
    const auto curve = wmit_curve(X, w, hyp, opt.tol, opt.exec);
    const auto shape = classify_monotone(hyp, curve);
    const bool iwmit = shape.is_increasing_weakly();
    r.conditions.push_back("IWMIT (grid): " + to_string(shape.kind));

    // Sampled s for the universal-in-s hypotheses.
    for (int k = 0; k < 16; ++k) {
        const double s = X.quantile(0.05 + 0.9 * k / 15.0);
        const auto Xs = residual_law(X, s);
        r.antecedents.push_back(check_order("st", Xs, X, std::nullopt, hyp, opt));
        r.antecedents.push_back(check_order("wmit", Xs, X, w, hyp, opt));
    }
    r.conditions.push_back("NBU and residual wmit sampled at 16 values of s");
    r.order_consequents.push_back(check_order("wmit", sol.excess_law(t), X, w, grid, opt));
    finalize(r);
    if (!iwmit) {
        r.antecedent_holds = false;
        r.violation = false;
    }
    return r;
}

}  // namespace wmit
