#include "wmit/inactivity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "support_integral.hpp"
#include "wmit/errors.hpp"

namespace wmit {

namespace {

double checked_cdf(const Distribution& d, double t, const char* who) {
    if (std::isnan(t)) throw DomainError(std::string(who) + ": t is NaN");
    const double F = d.cdf(t);
    if (!(F >= kCdfFloor)) {
        std::ostringstream os;
        os << who << ": F(" << t << ") = " << F << " is below the floor " << kCdfFloor
           << "; usable region is t >= " << d.domain_floor();
        throw DomainError(os.str(), t);
    }
    return F;
}

// phi(x) F(x), zero where F vanishes so phi is never asked for 1/0.
double phi_f(const Distribution& d, const WeightFn& w, double x) {
    const double F = d.cdf(x);
    if (!(F > 0.0)) return 0.0;
    return w.phi(x) * F;
}

double tau(const Distribution& d, double x) { return d.pdf(x) / d.cdf(x); }

}  // namespace

double mit(const Distribution& d, double t, double tol) {
    const double F = checked_cdf(d, t, "mit");
    const double lo = d.support().lower;
    auto g = [&](double x) { return d.cdf(x); };
    return integrate(g, lo, t, tol * F * std::max(1.0, t)).value / F;
}

double wmit(const Distribution& d, const WeightFn& w, double t, double tol) {
    const double F = checked_cdf(d, t, "wmit");
    const double lo = d.support().lower;
    auto g = [&](double x) { return phi_f(d, w, x); };
    return integrate(g, lo, t, tol * F * std::max(1.0, t)).value / F;
}

std::vector<double> wmit_curve(const Distribution& d, const WeightFn& w, const Grid& grid, double tol,
                               kernels::Exec exec) {
    std::vector<double> F(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) F[i] = checked_cdf(d, grid[i], "wmit_curve");
    const double origin = d.support().lower;
    auto panel = [&](double a, double b) {
        auto g = [&](double x) { return phi_f(d, w, x); };
        const double ptol = std::max(tol * d.cdf(b) * (b - a), 1e-300);
        return integrate(g, a, b, ptol).value;
    };
    auto acc = kernels::cumulative(origin, grid.points(), panel, exec);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] /= F[i];
    return acc;
}

double wmrl(const Distribution& d, const WeightFn& w, double t, double tol) {
    const double S = d.sf(t);
    if (!(S >= kCdfFloor)) throw DomainError("wmrl: survival function below the floor", t);
    auto g = [&](double x) { return w.phi(x) * d.sf(x); };
    return detail::integrate_support(d, g, t, tol * S, "wmrl (E[psi(X)])").value / S;
}

double weighted_past_mean(const Distribution& d, const WeightFn& w, double t, double tol) {
    const double F = checked_cdf(d, t, "weighted_past_mean");
    const double via_wmit = w.psi(t) - wmit(d, w, t, std::min(tol, 1e-10));
    if (!d.has_pdf()) return via_wmit;
    auto g = [&](double x) { return w.psi(x) * d.pdf(x); };
    const double direct = integrate(g, d.support().lower, t, std::min(tol, 1e-10) * F * (1.0 + w.psi(t))).value / F;
    const bool numeric_phi = w.kind() == "neglog-density" || w.declared_convexity() == Convexity::unknown;
    const double band = (numeric_phi ? 1e-5 : 1e-7) * (1.0 + std::abs(w.psi(t)));
    if (std::abs(direct - via_wmit) > band) {
        std::ostringstream os;
        os << "weighted_past_mean: psi(t) - wmit(t) = " << via_wmit << " disagrees with E[psi(X)|X<=t] = " << direct;
        throw NumericalError(os.str(), direct, t);
    }
    return direct;
}

double wmit_derivative(const Distribution& d, const WeightFn& w, double t, double tol) {
    if (!d.has_pdf()) throw UnsupportedError("wmit derivative needs a density");
    const double m = wmit(d, w, t, tol);
    return w.phi(t) - tau(d, t) * m;
}

double wmit_derivative_check(const Distribution& d, const WeightFn& w, const Grid& grid) {
    if (!d.has_pdf()) throw UnsupportedError("wmit_derivative_check: " + d.family() + " has no density");
    constexpr double kTightTol = 1e-12;
    const auto res = kernels::map(grid.points(), [&](double t) {
        const double h = 1e-5 * (1.0 + t);
        const double up = wmit(d, w, t + h, kTightTol);
        const double dn = wmit(d, w, t - h, kTightTol);
        const double numeric = (up - dn) / (2.0 * h);
        const double closed = w.phi(t) - tau(d, t) * wmit(d, w, t, kTightTol);
        return std::abs(numeric - closed);
    });
    return *std::max_element(res.begin(), res.end());
}

double reconstruct_cdf(const std::function<double(double)>& wmit_fn, const std::function<double(double)>& wmit_deriv,
                       const WeightFn& w, double t, double upper, double tol) {
    if (!(t < upper)) throw DomainError("reconstruct_cdf: need t < upper", t);
    auto g = [&](double x) {
        const double m = wmit_fn(x);
        if (!(m > 0.0)) {
            std::ostringstream os;
            os << "reconstruct_cdf: WMIT curve is not positive at x=" << x << " (characterization requires m > 0)";
            throw PreconditionViolation(os.str(), x);
        }
        return (w.phi(x) - wmit_deriv(x)) / m;
    };
    const double integral = integrate(g, t, upper, tol).value;
    const double F = std::exp(-integral);
    if (F > 1.0 + 1e-6) {
        throw NumericalError("reconstruct_cdf: reconstructed value exceeds 1", F, t);
    }
    return std::min(F, 1.0);
}

IwmitReport iwmit_classify(const Distribution& d, const WeightFn& w, const Grid& grid) {
    if (!d.has_pdf()) throw UnsupportedError("iwmit_classify: " + d.family() + " has no density");
    IwmitReport rep;
    const auto pts = grid.points();
    const auto m = wmit_curve(d, w, grid);
    rep.direct = classify_monotone(grid, m);

    const auto taus = kernels::map(pts, [&](double x) { return tau(d, x); });
    const auto phis = kernels::map(pts, [&](double x) { return w.phi(x); });

    std::vector<double> ratio(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) ratio[i] = phis[i] / taus[i];
    rep.cond_i = classify_monotone(grid, ratio);

    rep.cond_ii_phi = classify_monotone(grid, phis);
    const auto mits = wmit_curve(d, make_weight("identity"), grid);
    rep.cond_ii_imit = classify_monotone(grid, mits);

    if (w.psi_finite()) {
        bool ok = true;
        std::vector<double> v(pts.size());
        for (std::size_t i = 0; i < pts.size() && ok; ++i) {
            if (!(phis[i] > 0.0)) {
                ok = false;
                break;
            }
            v[i] = w.psi(pts[i]) * taus[i] / phis[i];
            if (!std::isfinite(v[i])) ok = false;
        }
        if (ok) rep.cond_iii = classify_monotone(grid, v);
        rep.drhr = classify_monotone(grid, taus);
        rep.psi_convexity = certify_convexity(w, grid.lo(), grid.hi()).kind;
    }
    if (w.kind() == "power") {
        std::vector<double> xt(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) xt[i] = pts[i] * taus[i];
        rep.x_tau = classify_monotone(grid, xt);
    }
    return rep;
}

double dynamic_cumulative_entropy(const Distribution& d, double t, double tol) {
    const double F = checked_cdf(d, t, "dynamic_cumulative_entropy");
    const double lo = d.support().lower;
    const double atol = tol * F * std::max(1.0, t);
    auto f1 = [&](double x) { return d.cdf(x); };
    auto f2 = [&](double x) {
        const double Fx = d.cdf(x);
        if (!(Fx > 0.0)) return 0.0;
        return Fx * d.log_cdf(x);
    };
    const double i1 = integrate(f1, lo, t, atol).value;
    const double i2 = integrate(f2, lo, t, atol).value;
    return (d.log_cdf(t) * i1 - i2) / F;
}

AucResult auc(const Distribution& x, const Distribution& y, double tol) {
    if (!x.has_pdf() || !y.has_pdf()) throw UnsupportedError("auc: both laws need densities");
    const WeightFn w = make_weight("cdf-of", y);
    const double upper = std::max(x.effective_upper(), y.effective_upper());
    const double lo = std::min(x.support().lower, y.support().lower);

    const double r1 = wmrl(x, w, lo, tol);

    auto g2 = [&](double u) { return y.pdf(u) * x.cdf(u); };
    const double r2 = 1.0 - integrate(g2, lo, upper, tol).value / x.cdf(upper);

    auto g3 = [&](double u) { return y.cdf(u) * x.pdf(u); };
    const double r3 = integrate(g3, lo, upper, tol).value;

    for (double v : {r1, r2, r3}) {
        if (!std::isfinite(v)) throw NumericalError("auc: a route diverged", r3);
    }
    return {r3, {std::abs(r1 - r2), std::abs(r1 - r3), std::abs(r2 - r3)}};
}

double age_replacement_mttf(const Distribution& d, double t, double tol) {
    const double F = checked_cdf(d, t, "age_replacement_mttf");
    auto g = [&](double x) { return d.sf(x); };
    return integrate(g, d.support().lower, t, tol * F * std::max(1.0, t)).value / F;
}

}  // namespace wmit
