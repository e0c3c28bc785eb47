#include "wmit/spread.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "support_integral.hpp"
#include "wmit/errors.hpp"
#include "wmit/inactivity.hpp"

namespace wmit {

namespace {

void require_open(double p, const char* who) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError(std::string(who) + ": p must lie in (0,1)", p);
}

// F^-1(p), switching to the survival side in the upper half for accuracy.
double q_of(const Distribution& d, double p) { return p > 0.5 ? d.isf(1.0 - p) : d.quantile(p); }

void cross_check(double a, double b, double scale, const char* who) {
    if (std::abs(a - b) > 1e-7 * (1.0 + scale)) {
        std::ostringstream os;
        os << who << ": support-domain value " << a << " and quantile-domain value " << b << " disagree";
        throw NumericalError(os.str(), a);
    }
}

// integral of g(p) over (0,1). The upper half runs in u = -log(1-p) so that tails growing like a
// power of log(1/(1-p)) become a decaying integrand instead of an endpoint singularity.
double integrate_unit(const std::function<double(double)>& g, double tol) {
    const double lower = integrate(g, 0.0, 0.5, 0.5 * tol).value;
    auto h = [&](double u) {
        const double s = std::exp(-u);
        return s > 0.0 ? g(1.0 - s) * s : 0.0;
    };
    return lower + integrate(h, std::log(2.0), INFINITY, 0.5 * tol).value;
}

}  // namespace

double left_spread(const Distribution& d, double p, double tol) {
    return transformed_left_spread(d, make_weight("identity"), p, tol);
}

double transformed_left_spread(const Distribution& d, const WeightFn& w, double p, double tol) {
    require_open(p, "left spread");
    const double x = q_of(d, p);
    const double lo = d.support().lower;
    if (!(x > lo)) return 0.0;
    auto g = [&](double u) {
        const double F = d.cdf(u);
        return F > 0.0 ? w.phi(u) * F : 0.0;
    };
    const double value = integrate(g, lo, x, tol * std::max(1.0, x)).value;
    if (w.psi_finite()) {
        // Quantile-domain form: integral_0^p (psi(x_p) - psi(F^-1(q))) dq.
        const double px = w.psi(x);
        auto h = [&](double q) { return px - w.psi(d.quantile(q)); };
        const double alt = integrate(h, 0.0, p, tol * std::max(1.0, px)).value;
        cross_check(value, alt, px, "left spread");
    }
    return value;
}

double right_spread(const Distribution& d, double p, double tol) {
    require_open(p, "right spread");
    const double x = q_of(d, p);
    auto g = [&](double u) { return d.sf(u); };
    return detail::integrate_support(d, g, x, tol * detail::scale_of(d), "right spread (mean)").value;
}

double quantile_variance(const Distribution& d, const WeightFn& w, double tol) {
    auto g = [&](double p) {
        if (p < kCdfFloor || p >= 1.0) return 0.0;
        const double m = wmit(d, w, q_of(d, p), tol);
        return m * m;
    };
    const double s = detail::scale_of(d);
    return integrate_unit(g, tol * s * s);
}

double quantile_gce(const Distribution& d, const WeightFn& w, int n, double tol) {
    if (n < 1 || n > 20) throw DomainError("quantile_gce: n outside [1, 20]", n);
    const double lf = log_factorial(static_cast<unsigned>(n - 1));
    auto g = [&](double p) {
        if (p < kCdfFloor || p >= 1.0) return 0.0;
        const double m = wmit(d, w, q_of(d, p), tol);
        if (n == 1) return m;
        return m * std::exp((n - 1) * std::log(-std::log(p)) - lf);
    };
    return integrate_unit(g, tol * detail::scale_of(d));
}

}  // namespace wmit
