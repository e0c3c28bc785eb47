#include "wmit/records.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wmit/errors.hpp"
#include "wmit/inactivity.hpp"
#include "wmit/infomeasures.hpp"

namespace wmit {

namespace {

void guard(int n) {
    if (n < 0 || n > kMaxRecordIndex) throw DomainError("record index outside [0, 20]", n);
}

// T = -log F, via log1p on the survival side when F is close to one.
double cum_rev(const Distribution& d, double x) {
    const double s = d.sf(x);
    if (s < 0.5) return -std::log1p(-s);
    const double F = d.cdf(x);
    return F > 0.0 ? -std::log(F) : std::numeric_limits<double>::infinity();
}

// P(Gamma(n+1) > s) = e^-s sum_{k<=n} s^k/k!.
double gamma_upper(int n, double s) {
    if (s <= 0.0) return 1.0;
    double acc = 0.0;
    for (int k = 0; k <= n; ++k) acc += std::exp(log_poisson_weight(static_cast<unsigned>(k), s) - s);
    return std::min(acc, 1.0);
}

// P(Gamma(n+1) <= s) = e^-s sum_{k>n} s^k/k!; series is accurate where the upper tail is near one.
double gamma_lower(int n, double s) {
    if (s <= 0.0) return 0.0;
    if (s > n + 1.0) return 1.0 - gamma_upper(n, s);
    double acc = 0.0;
    for (unsigned k = static_cast<unsigned>(n) + 1;; ++k) {
        const double term = std::exp(log_poisson_weight(k, s) - s);
        acc += term;
        if (term < 1e-17 * acc || k > 2000) break;
    }
    return std::min(acc, 1.0);
}

// s with P(Gamma(n+1) > s) = u, solving on whichever tail is smaller.
double gamma_upper_inverse(int n, double u) {
    const bool lower_side = u > 0.5;
    const double target = lower_side ? 1.0 - u : u;
    auto excess = [&](double s) { return lower_side ? gamma_lower(n, s) - target : target - gamma_upper(n, s); };
    // excess is increasing in s on both branches.
    double lo = 0.0;
    double hi = n + 1.0;
    while (excess(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double var_of(const std::vector<double>& v, double m) {
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

IdentityCheck from_values(const std::vector<double>& vals, double scale, double target, std::size_t excluded) {
    if (vals.size() < 2) throw NumericalError("record identity: fewer than two usable draws", 0.0);
    IdentityCheck c;
    const double m = mean_of(vals);
    c.estimate = m * scale;
    c.target = target;
    c.std_error = std::sqrt(var_of(vals, m) / static_cast<double>(vals.size())) * std::abs(scale);
    c.residual = c.std_error > 0.0 ? (c.estimate - target) / c.std_error : (c.estimate == target ? 0.0 : INFINITY);
    c.draws = vals.size();
    c.excluded = excluded;
    return c;
}

void require_subscript(int n) {
    if (n < 1 || n > 5) throw DomainError("record subscript n must lie in 1..5 (X_1 is the base draw)", n);
}

}  // namespace

double record_cdf(const RecordModel& m, double x) {
    guard(m.n);
    const double F = m.base.cdf(x);
    if (F <= 0.0) return 0.0;
    if (m.n == 0) return F;
    const double T = cum_rev(m.base, x);
    // Near one the finite sum loses monotonicity in the last bit; the tail series does not.
    if (F > 0.5) return 1.0 - gamma_lower(m.n, T);
    double acc = 0.0;
    for (int k = 0; k <= m.n; ++k) acc += std::exp(std::log(F) + log_poisson_weight(static_cast<unsigned>(k), T));
    return std::min(acc, 1.0);
}

double record_sf(const RecordModel& m, double x) {
    guard(m.n);
    if (m.n == 0) return m.base.sf(x);
    const double F = m.base.cdf(x);
    if (F <= 0.0) return 1.0;
    return gamma_lower(m.n, cum_rev(m.base, x));
}

double record_pdf(const RecordModel& m, double x) {
    guard(m.n);
    if (!m.base.has_pdf()) throw UnsupportedError("record_pdf: base law has no density");
    const double f = m.base.pdf(x);
    if (f <= 0.0 || m.base.cdf(x) <= 0.0) return 0.0;
    if (m.n == 0) return f;
    return f * std::exp(log_poisson_weight(static_cast<unsigned>(m.n), cum_rev(m.base, x)));
}

Distribution record_distribution(const RecordModel& m) {
    guard(m.n);
    std::ostringstream os;
    os << "record(" << m.base.name() << ",n=" << m.n << ")";
    std::function<double(double)> pdf;
    if (m.base.has_pdf()) pdf = [m](double x) { return record_pdf(m, x); };
    return Distribution::from_functions(os.str(), [m](double x) { return record_cdf(m, x); }, m.base.support(), pdf);
}

std::vector<double> sample_records(const Distribution& base, int n, std::size_t count, std::uint64_t seed,
                                   kernels::Exec exec) {
    guard(n);
    if (count < 1) throw DomainError("sample_records: count must be at least 1");
    // F_{n+1}(x) = P(Gamma(n+1) > T(x)), so inverting in s = T(x) then F(x) = e^-s is exact.
    auto draw = [&](std::mt19937_64& rng) {
        const double u = kernels::uniform_open(rng);
        const double s = gamma_upper_inverse(n, u);
        return s < std::log(2.0) ? base.isf(-std::expm1(-s)) : base.quantile(std::exp(-s));
    };
    return kernels::draw(count, seed, draw, exec);
}

IdentityCheck rit_identity_check(const Distribution& base, const WeightFn& w, int n, std::size_t count,
                                 std::uint64_t seed) {
    require_subscript(n);
    const auto xs = sample_records(base, n - 1, count, seed);
    const auto vals = kernels::map(xs, [&](double x) {
        return base.cdf(x) >= kCdfFloor ? wmit(base, w, x) : std::numeric_limits<double>::quiet_NaN();
    });
    std::vector<double> kept;
    kept.reserve(vals.size());
    for (double v : vals) {
        if (!std::isnan(v)) kept.push_back(v);
    }
    return from_values(kept, 1.0, wgce(base, w, n), vals.size() - kept.size());
}

CovIdentityChecks cov_identity_check(const Distribution& base, const WeightFn& w, int n, std::size_t count,
                                     std::uint64_t seed) {
    require_subscript(n);
    if (!base.has_pdf()) throw UnsupportedError("cov_identity_check: base law has no density");
    const auto xs = sample_records(base, n - 1, count, seed);
    std::vector<double> a;
    std::vector<double> b;
    std::vector<double> t;
    std::size_t excluded = 0;
    for (double x : xs) {
        const double F = base.cdf(x);
        const double f = base.pdf(x);
        if (F < kCdfFloor || !(f > 0.0)) {
            ++excluded;
            continue;
        }
        const double T = cum_rev(base, x);
        a.push_back(w.psi(x));
        b.push_back(T);
        t.push_back(w.phi(x) * T * F / f);
    }
    const double target = wgce(base, w, n);
    const double inv_n = 1.0 / n;
    CovIdentityChecks out;
    out.tau_form = from_values(t, inv_n, target, excluded);
    // Cov via centred products; its standard error is that of the mean of the products.
    const double ma = mean_of(a);
    const double mb = mean_of(b);
    std::vector<double> prod(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) prod[i] = (a[i] - ma) * (b[i] - mb);
    out.cov_form = from_values(prod, inv_n, -target, excluded);
    return out;
}

IdentityCheck spacing_identity_check(const Distribution& base, const WeightFn& w, int n, std::size_t count,
                                     std::uint64_t seed) {
    require_subscript(n);
    const auto x1 = sample_records(base, n - 1, count, seed);
    const auto x2 = sample_records(base, n, count, seed + 0x9e3779b97f4a7c15ULL);
    std::vector<double> p1(x1.size());
    std::vector<double> p2(x2.size());
    for (std::size_t i = 0; i < x1.size(); ++i) p1[i] = w.psi(x1[i]);
    for (std::size_t i = 0; i < x2.size(); ++i) p2[i] = w.psi(x2[i]);
    const double m1 = mean_of(p1);
    const double m2 = mean_of(p2);
    IdentityCheck c;
    c.estimate = m1 - m2;
    c.target = wgce(base, w, n);
    c.std_error = std::sqrt(var_of(p1, m1) / p1.size() + var_of(p2, m2) / p2.size());
    c.residual = (c.estimate - c.target) / c.std_error;
    c.draws = p1.size() + p2.size();
    return c;
}

}  // namespace wmit
