#include "wmit/infomeasures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "support_integral.hpp"
#include "wmit/errors.hpp"
#include "wmit/inactivity.hpp"
#include "wmit/kernels.hpp"

namespace wmit {

namespace {

constexpr double kDensityFloor = 1e-300;

void guard_order(int n, int lo = 1) {
    if (n < lo || n > kMaxOrder) {
        std::ostringstream os;
        os << "order index n=" << n << " outside [" << lo << ", " << kMaxOrder << "]";
        if (n == 0) os << " (the order-0 measure may diverge and is rejected)";
        throw DomainError(os.str(), n);
    }
}

void need_pdf(const Distribution& d, const char* who) {
    if (!d.has_pdf()) throw UnsupportedError(std::string(who) + ": " + d.family() + " has no density");
}

// F T^n / n! in log domain; F = exp(-T).
double gce_kernel(const Distribution& d, double x, int n) {
    const double T = -d.log_cdf(x);
    if (!std::isfinite(T) || T <= 0.0) return 0.0;
    return std::exp(log_poisson_weight(static_cast<unsigned>(n), T) - T);
}

double f_log_f(const Distribution& d, double x) {
    const double f = d.pdf(x);
    return f > kDensityFloor ? f * std::log(f) : 0.0;
}

double log_f(const Distribution& d, double x) { return std::log(std::max(d.pdf(x), kDensityFloor)); }

// (1/S(x)) integral_x^inf f log f.
double residual_mean_log_f(const Distribution& d, double x, double tol) {
    const double S = d.sf(x);
    if (!(S > 0.0)) return log_f(d, x);
    auto g = [&](double u) { return f_log_f(d, u); };
    const Support s = d.support();
    const double upper = std::isfinite(s.upper) ? s.upper : std::numeric_limits<double>::infinity();
    if (x >= upper) return log_f(d, x);
    return integrate(g, x, upper, tol * S).value / S;
}

// (1/F(x)) integral_0^x f log f.
double past_mean_log_f(const Distribution& d, double x, double tol) {
    const double F = d.cdf(x);
    if (!(F > 0.0)) return log_f(d, x);
    auto g = [&](double u) { return f_log_f(d, u); };
    return integrate(g, d.support().lower, x, tol * F * std::max(1.0, x)).value / F;
}

}  // namespace

double gce(const Distribution& d, int n, double tol) {
    guard_order(n);
    auto g = [&](double x) { return gce_kernel(d, x, n); };
    // Absolute tolerance split over the main and tail pieces.
    return detail::integrate_support(d, g, d.support().lower, tol / 3.0, "gce").value;
}

double cumulative_entropy(const Distribution& d, double tol) { return gce(d, 1, tol); }

double cumulative_entropy_via_mit(const Distribution& d, double tol) {
    need_pdf(d, "cumulative_entropy_via_mit");
    auto g = [&](double x) { return d.pdf(x) * mit(d, x, tol); };
    return detail::integrate_support(d, g, d.domain_floor(), tol * detail::scale_of(d), "E[mit(X)]").value;
}

double wgce(const Distribution& d, const WeightFn& w, int n, double tol) {
    guard_order(n);
    auto g = [&](double x) {
        const double k = gce_kernel(d, x, n);
        return k > 0.0 ? w.phi(x) * k : 0.0;
    };
    return detail::integrate_support(d, g, d.support().lower, tol / 3.0, "wgce").value;
}

double weighted_cumulative_entropy(const Distribution& d, double tol) {
    auto g = [&](double x) { return x * gce_kernel(d, x, 1); };
    return detail::integrate_support(d, g, d.support().lower, tol / 3.0, "weighted cumulative entropy").value;
}

VariancePair variance_of_weighted(const Distribution& d, const WeightFn& w, double tol) {
    need_pdf(d, "variance_of_weighted");
    const double s = detail::scale_of(d);
    const double lo = d.support().lower;
    auto m1 = [&](double x) { return w.phi(x) * d.sf(x); };
    auto m2 = [&](double x) {
        const double S = d.sf(x);
        return S > 0.0 ? 2.0 * w.psi(x) * w.phi(x) * S : 0.0;
    };
    const double e1 = detail::integrate_support(d, m1, lo, tol * s, "E[psi(X)]").value;
    const double e2 = detail::integrate_support(d, m2, lo, tol * s * s, "E[psi(X)^2]").value;
    VariancePair out;
    out.direct = e2 - e1 * e1;
    auto v = [&](double x) {
        const double m = wmit(d, w, x, tol);
        return m * m * d.pdf(x);
    };
    out.via_wmit = detail::integrate_support(d, v, d.domain_floor(), tol * s * s, "E[wmit^2(X)]").value;
    return out;
}

double differential_entropy(const Distribution& d, double tol) {
    need_pdf(d, "differential_entropy");
    auto g = [&](double x) { return f_log_f(d, x); };
    return -detail::integrate_support(d, g, d.support().lower, tol * detail::scale_of(d), "differential entropy").value;
}

double past_entropy(const Distribution& d, double t, double tol) {
    need_pdf(d, "past_entropy");
    const double F = d.cdf(t);
    if (!(F >= kCdfFloor)) throw DomainError("past_entropy: F(t) below the floor", t);
    return d.log_cdf(t) - past_mean_log_f(d, t, tol);
}

double residual_entropy(const Distribution& d, double t, double tol) {
    need_pdf(d, "residual_entropy");
    const double S = d.sf(t);
    if (!(S >= kCdfFloor)) throw DomainError("residual_entropy: survival function below the floor", t);
    return std::log(S) - residual_mean_log_f(d, t, tol);
}

VarentropyRoutes varentropy(const Distribution& d, double tol) {
    need_pdf(d, "varentropy");
    const double s = detail::scale_of(d);
    const double lo = d.support().lower;
    auto g1 = [&](double x) { return f_log_f(d, x); };
    const double mean_log_f = detail::integrate_support(d, g1, lo, tol * s, "E[log f(X)]").value;
    auto g2 = [&](double x) {
        const double f = d.pdf(x);
        if (!(f > kDensityFloor)) return 0.0;
        const double c = std::log(f) - mean_log_f;
        return f * c * c;
    };
    VarentropyRoutes out;
    out.direct = detail::integrate_support(d, g2, lo, tol * s, "varentropy").value;

    auto gr = [&](double x) {
        const double f = d.pdf(x);
        if (!(f > kDensityFloor) || !(d.sf(x) > 0.0)) return 0.0;
        const double c = std::log(f) - residual_mean_log_f(d, x, tol);
        return f * c * c;
    };
    out.via_residual = detail::integrate_support(d, gr, lo, tol * s, "varentropy (residual route)").value;

    auto gp = [&](double x) {
        const double f = d.pdf(x);
        if (!(f > kDensityFloor)) return 0.0;
        const double c = std::log(f) - past_mean_log_f(d, x, tol);
        return f * c * c;
    };
    out.via_past = detail::integrate_support(d, gp, d.domain_floor(), tol * s, "varentropy (past route)").value;
    return out;
}

MonteCarloEstimate varentropy_monte_carlo(const Distribution& d, std::size_t draws, std::uint64_t seed) {
    need_pdf(d, "varentropy_monte_carlo");
    if (draws < 2) throw DomainError("varentropy_monte_carlo: need at least 2 draws");
    const auto ic = kernels::draw(draws, seed, [&](std::mt19937_64& rng) { return -log_f(d, d.sample(rng)); });
    double mean = 0.0;
    for (double v : ic) mean += v;
    mean /= static_cast<double>(draws);
    double m2 = 0.0;
    double m4 = 0.0;
    for (double v : ic) {
        const double c = (v - mean) * (v - mean);
        m2 += c;
        m4 += c * c;
    }
    const double n = static_cast<double>(draws);
    m2 /= n;
    m4 /= n;
    MonteCarloEstimate out;
    out.value = m2 * n / (n - 1.0);
    out.std_error = std::sqrt(std::max(m4 - m2 * m2, 0.0) / n);
    out.draws = draws;
    return out;
}

VarentropyBoundReport varentropy_bound_check(const Distribution& d, std::size_t grid_points) {
    need_pdf(d, "varentropy_bound_check");
    VarentropyBoundReport rep;
    const Grid grid = quantile_grid(d, grid_points, 1e-4, 1.0 - 1e-4);
    const auto pts = grid.points();
    const auto lf = kernels::map(pts, [&](double x) { return log_f(d, x); });
    constexpr double kSlack = 1e-9;

    double run = -std::numeric_limits<double>::infinity();
    rep.worst_residual = -std::numeric_limits<double>::infinity();
    for (std::size_t i = pts.size(); i-- > 0;) {
        run = std::max(run, lf[i]);
        rep.worst_residual = std::max(rep.worst_residual, run - lf[i]);
    }
    rep.cond_residual = rep.worst_residual <= 1.0 + kSlack;

    run = -std::numeric_limits<double>::infinity();
    rep.worst_past = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        run = std::max(run, lf[i]);
        rep.worst_past = std::max(rep.worst_past, run - lf[i]);
    }
    rep.cond_past = rep.worst_past <= 1.0 + kSlack;

    const auto H = kernels::map(pts, [&](double t) { return residual_entropy(d, t, 1e-10); });
    const auto Hbar = kernels::map(pts, [&](double t) { return past_entropy(d, t, 1e-10); });
    rep.residual_entropy = classify_monotone(grid, H, 1e-6 * (1.0 + std::abs(H.front())));
    rep.past_entropy = classify_monotone(grid, Hbar, 1e-6 * (1.0 + std::abs(Hbar.back())));

    rep.V = varentropy(d).direct;
    rep.part_i = rep.cond_residual && rep.residual_entropy.is_decreasing_weakly();
    rep.part_ii = rep.cond_past && rep.past_entropy.is_increasing_weakly();
    rep.bound_holds = rep.V <= 1.0 + 1e-6;
    rep.violation = (rep.part_i || rep.part_ii) && !rep.bound_holds;
    return rep;
}

RecurrenceResiduals gce_recurrence_check(const Distribution& d, const WeightFn& w, int n) {
    guard_order(n, 2);
    need_pdf(d, "gce_recurrence_check");
    RecurrenceResiduals r;
    r.target = wgce(d, w, n);
    r.previous = wgce(d, w, n - 1);
    if (!(r.previous > 0.0)) throw NumericalError("gce_recurrence_check: previous-order WGCE is zero", r.previous);
    const double s = detail::scale_of(d);
    constexpr double kInner = 1e-12;
    const double lo = d.domain_floor();

    // Route (i): E[h(X)] with h(t) = integral_t^inf m'(x) T^{n-1}(x) dx, exchanged to
    // integral m'(x) T^{n-1}(x) F(x) dx; m' from the derivative identity.
    auto gi = [&](double x) {
        const double k = gce_kernel(d, x, n - 1);
        if (!(k > 0.0)) return 0.0;
        return wmit_derivative(d, w, x, kInner) * k;
    };
    const double e_h = detail::integrate_support(d, gi, lo, 1e-11 * s, "recurrence (i)").value;
    r.route_i = r.previous - e_h;

    // Route (ii): Z has density F T^{n-1} / ((n-1)! CE_{psi,n-1}); m' by central differences.
    auto gii = [&](double x) {
        const double k = gce_kernel(d, x, n - 1);
        if (!(k > 0.0)) return 0.0;
        double h = 1e-4 * std::max(x, 1e-8);
        double deriv;
        if (d.cdf(x - h) >= kCdfFloor) {
            deriv = (wmit(d, w, x + h, kInner) - wmit(d, w, x - h, kInner)) / (2.0 * h);
        } else {
            deriv = (wmit(d, w, x + h, kInner) - wmit(d, w, x, kInner)) / h;
        }
        return deriv * k / r.previous;
    };
    const double e_z = detail::integrate_support(d, gii, lo, 1e-10 * s, "recurrence (ii)").value;
    r.route_ii = r.previous * (1.0 - e_z);
    r.residual_i = std::abs(r.route_i - r.target);
    r.residual_ii = std::abs(r.route_ii - r.target);
    return r;
}

double lower_bound_constant(int n) {
    guard_order(n);
    // u = e^-s turns the integral into int_0^inf (n log s - s) e^-s ds, singular only at s = 0.
    auto g = [n](double s) { return (n * std::log(s) - s) * std::exp(-s); };
    return std::exp(integrate(g, 0.0, std::numeric_limits<double>::infinity(), 1e-12).value);
}

BoundReport bound_suite(const Distribution& d, const WeightFn& w, int n) {
    guard_order(n);
    need_pdf(d, "bound_suite");
    BoundReport rep;
    auto margin = [](double a, double b) { return 1e-7 * (1.0 + std::abs(a) + std::abs(b)); };

    const double ce_psi_n = wgce(d, w, n);
    const double ce_n = gce(d, n);
    const double ce_1 = gce(d, 1);
    const double sigma_psi = std::sqrt(std::max(variance_of_weighted(d, w).direct, 0.0));
    const double sigma_x = std::sqrt(std::max(variance_of_weighted(d, make_weight("identity")).direct, 0.0));

    {
        BoundCheck c;
        c.name = "wgce-upper";
        c.applicable = true;
        const unsigned k = static_cast<unsigned>(n - 1);
        c.lhs = ce_psi_n;
        c.rhs = std::exp(0.5 * log_factorial(2 * k) - log_factorial(k)) * sigma_psi;
        c.margin = margin(c.lhs, c.rhs);
        rep.checks.push_back(c);
    }

    const Grid wide = quantile_grid(d, 512, 1e-10, 1.0 - 1e-10);
    const auto [m, M] = check_bounds(w, wide);
    {
        BoundCheck c;
        c.name = "wgce-lower";
        if (!w.psi_finite()) {
            c.reason = "psi is infinite";
        } else if (!(m > 0.0) && w.kind() != "power" && w.kind() != "half-square") {
            c.reason = "phi vanishes on the grid";
        } else {
            c.applicable = true;
            const double s = detail::scale_of(d);
            auto g = [&](double x) {
                const double f = d.pdf(x);
                const double p = w.phi(x);
                if (!(f > kDensityFloor) || !(p > 0.0)) return 0.0;
                return f * std::log(p);
            };
            const double e_log_phi =
                detail::integrate_support(d, g, d.support().lower, 1e-11 * s, "E[log phi(X)]").value;
            const double h_psi = differential_entropy(d) + e_log_phi;
            c.lhs = lower_bound_constant(n) * std::exp(h_psi - log_factorial(static_cast<unsigned>(n)));
            c.rhs = ce_psi_n;
            c.margin = margin(c.lhs, c.rhs);
        }
        rep.checks.push_back(c);
    }

    const ConvexityCertificate conv =
        w.psi_finite() ? certify_convexity(w, wide.lo(), wide.hi()) : ConvexityCertificate{};
    {
        BoundCheck c;
        c.name = "sigma-vs-psi-ce";
        if (!is_convex(conv.kind)) {
            c.reason = "psi not certified convex (" + to_string(conv.kind) + ")";
        } else {
            c.applicable = true;
            c.lhs = w.psi(ce_1);
            c.rhs = sigma_psi;
            c.margin = margin(c.lhs, c.rhs);
        }
        rep.checks.push_back(c);
    }
    {
        const bool bounded = std::isfinite(M);
        BoundCheck lo;
        lo.name = "sigma-ratio-lower";
        BoundCheck hi;
        hi.name = "sigma-ratio-upper";
        BoundCheck glo;
        glo.name = "wgce-ratio-lower";
        BoundCheck ghi;
        ghi.name = "wgce-ratio-upper";
        for (BoundCheck* c : {&lo, &hi, &glo, &ghi}) {
            c->applicable = bounded;
            if (!bounded) c->reason = "phi unbounded on the grid";
        }
        lo.lhs = m * sigma_x;
        lo.rhs = sigma_psi;
        hi.lhs = sigma_psi;
        hi.rhs = M * sigma_x;
        glo.lhs = m * ce_n;
        glo.rhs = ce_psi_n;
        ghi.lhs = ce_psi_n;
        ghi.rhs = M * ce_n;
        for (BoundCheck* c : {&lo, &hi, &glo, &ghi}) {
            c->margin = margin(c->lhs, c->rhs);
            rep.checks.push_back(*c);
        }
    }
    {
        BoundCheck c;
        c.name = "wgce-vs-psi-gce";
        if (is_convex(conv.kind)) {
            c.applicable = true;
            c.lhs = w.psi(ce_n);
            c.rhs = ce_psi_n;
        } else if (is_concave(conv.kind)) {
            c.applicable = true;
            c.lhs = ce_psi_n;
            c.rhs = w.psi(ce_n);
        } else {
            c.reason = "psi neither certified convex nor concave";
        }
        c.margin = margin(c.lhs, c.rhs);
        rep.checks.push_back(c);
    }
    if (n >= 2) {
        BoundCheck c;
        c.name = "wgce-ratio-monotone";
        const double prev_ratio = wgce(d, w, n - 1) / gce(d, n - 1);
        const double ratio = ce_psi_n / ce_n;
        if (conv.kind == Convexity::convex) {
            c.applicable = true;
            c.lhs = ratio;
            c.rhs = prev_ratio;
        } else if (conv.kind == Convexity::concave) {
            c.applicable = true;
            c.lhs = prev_ratio;
            c.rhs = ratio;
        } else if (conv.kind == Convexity::affine) {
            c.applicable = false;
            c.reason = "psi affine: ratio constant";
        } else {
            c.reason = "psi neither certified convex nor concave";
        }
        c.margin = margin(c.lhs, c.rhs);
        rep.checks.push_back(c);
    }
    return rep;
}

}  // namespace wmit
