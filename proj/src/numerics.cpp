#include "wmit/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "wmit/errors.hpp"
#include "wmit/kernels.hpp"

namespace wmit {

namespace {

constexpr int kMaxDepth = 48;
constexpr std::size_t kMaxEvals = 20'000'000;
constexpr int kInitialPanels = 8;

struct SimpsonState {
    RealFn g;
    double a;  // original interval, for error messages
    double width;
    std::size_t evals = 0;
    double err = 0.0;
    bool forced = false;

    // Integrand in u-space: f(x(u)) * dx/du, zero at u = 0 and u = 1.
    double eval(double u) {
        if (u <= 0.0 || u >= 1.0) return 0.0;
        const double s = u * u * (3.0 - 2.0 * u);
        const double ds = 6.0 * u * (1.0 - u);
        const double x = a + width * s;
        ++evals;
        if (evals > kMaxEvals) throw NumericalError("quadrature evaluation budget exhausted", 0.0, x);
        const double fx = g(x);
        if (!std::isfinite(fx)) {
            throw NumericalError("integrand is not finite", 0.0, x);
        }
        return fx * width * ds;
    }

    double recurse(double lo, double hi, double flo, double fmid, double fhi, double whole, double tol,
                   int depth) {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid);
        const double rm = 0.5 * (mid + hi);
        const double flm = eval(lm);
        const double frm = eval(rm);
        const double h = hi - lo;
        const double left = h / 12.0 * (flo + 4.0 * flm + fmid);
        const double right = h / 12.0 * (fmid + 4.0 * frm + fhi);
        const double both = left + right;
        const double delta = both - whole;
        const double scale = h / 12.0 * (std::abs(flo) + 4.0 * std::abs(flm) + 2.0 * std::abs(fmid) +
                                          4.0 * std::abs(frm) + std::abs(fhi));
        const bool roundoff = std::abs(delta) <= 64.0 * std::numeric_limits<double>::epsilon() * scale;
        if (std::abs(delta) <= 15.0 * tol || roundoff || depth >= kMaxDepth) {
            if (depth >= kMaxDepth && !(std::abs(delta) <= 15.0 * tol) && !roundoff) forced = true;
            err += std::abs(delta) / 15.0;
            return both + delta / 15.0;
        }
        return recurse(lo, mid, flo, flm, fmid, left, 0.5 * tol, depth + 1) +
               recurse(mid, hi, fmid, frm, fhi, right, 0.5 * tol, depth + 1);
    }
};

QuadResult integrate_finite(RealFn f, double a, double b, double tol) {
    SimpsonState st{f, a, b - a};
    double total = 0.0;
    const double step = 1.0 / kInitialPanels;
    for (int i = 0; i < kInitialPanels; ++i) {
        const double lo = i * step;
        const double hi = (i + 1) * step;
        const double flo = st.eval(lo);
        const double fmid = st.eval(0.5 * (lo + hi));
        const double fhi = st.eval(hi);
        const double whole = step / 6.0 * (flo + 4.0 * fmid + fhi);
        total += st.recurse(lo, hi, flo, fmid, fhi, whole, tol / kInitialPanels, 0);
    }
    if (st.forced && st.err > tol) {
        throw NumericalError("adaptive Simpson did not converge", total);
    }
    return {total, st.err, st.evals};
}

}  // namespace

QuadResult integrate(RealFn f, double a, double b, double tol) {
    if (!(tol > 0.0)) throw DomainError("integrate: tol must be positive");
    if (std::isnan(a) || std::isnan(b)) throw DomainError("integrate: NaN limit");
    if (a > b) throw DomainError("integrate: requires a < b", a);
    if (a == b) return {0.0, 0.0, 1};
    if (std::isfinite(b)) return integrate_finite(f, a, b, tol);

    // Infinite upper limit: doubling panels until the envelope has decayed.
    QuadResult acc;
    double lo = a;
    double w = std::max(1.0, std::abs(a));
    int quiet = 0;
    for (int k = 0; k < 64; ++k) {
        const double hi = lo + w;
        const auto piece = integrate_finite(f, lo, hi, tol / 4.0);
        acc.value += piece.value;
        acc.error_estimate += piece.error_estimate;
        acc.evaluations += piece.evaluations;
        quiet = std::abs(piece.value) <= tol / 4.0 ? quiet + 1 : 0;
        if (quiet >= 2) return acc;
        lo = hi;
        w *= 2.0;
    }
    throw NumericalError("integrate: tail did not decay (divergent integral?)", acc.value, lo);
}

double invert_cdf(RealFn cdf, double p, double lo, double hi, double tol, std::optional<RealFn> pdf) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("invert_cdf: p must lie in (0,1)");
    if (!(lo < hi)) throw DomainError("invert_cdf: empty bracket", lo);
    const double flo = cdf(lo);
    const double fhi = cdf(hi);
    if (!(flo <= p && p <= fhi)) {
        std::ostringstream os;
        os << "invert_cdf: p=" << p << " outside bracket [F(lo)=" << flo << ", F(hi)=" << fhi << "]";
        throw DomainError(os.str(), p);
    }
    if (flo >= p) return lo;
    // Invariant: F(lo) < p <= F(hi).
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (cdf(mid) >= p) {
            hi = mid;
        } else {
            lo = mid;
        }
        if (hi - lo <= 1e-12 * std::abs(hi)) break;
    }
    double x = hi;
    if (pdf) {
        const double fx = (*pdf)(x);
        const double resid = cdf(x) - p;
        if (fx > 0.0 && std::isfinite(fx) && std::abs(resid) > tol * 1e-3) {
            const double cand = x - resid / fx;
            if (cand >= lo && cand <= hi && std::abs(cdf(cand) - p) < std::abs(resid)) x = cand;
        }
    }
    return x;
}

Grid Grid::uniform(double lo, double hi, std::size_t n) {
    if (!(lo < hi) || n < 3) throw DomainError("Grid::uniform: need lo < hi and n >= 3");
    std::vector<double> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    pts.back() = hi;
    Grid g(std::move(pts));
    std::ostringstream os;
    os << "uniform[" << lo << "," << hi << "] n=" << n;
    g.label_ = os.str();
    return g;
}

Grid Grid::logarithmic(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0 && lo < hi) || n < 3) throw DomainError("Grid::logarithmic: need 0 < lo < hi and n >= 3");
    std::vector<double> pts(n);
    const double la = std::log(lo);
    const double lb = std::log(hi);
    for (std::size_t i = 0; i < n; ++i) pts[i] = std::exp(la + (lb - la) * static_cast<double>(i) / static_cast<double>(n - 1));
    pts.front() = lo;
    pts.back() = hi;
    Grid g(std::move(pts));
    std::ostringstream os;
    os << "log[" << lo << "," << hi << "] n=" << n;
    g.label_ = os.str();
    return g;
}

Grid Grid::from_points(std::vector<double> pts) {
    if (pts.size() < 3) throw DomainError("Grid: at least 3 points required");
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (!(pts[i] > pts[i - 1])) throw DomainError("Grid: points must be strictly increasing", pts[i]);
    }
    return Grid(std::move(pts));
}

Grid Grid::with_random_points(std::size_t count, std::uint64_t seed) const {
    auto rng = kernels::make_stream(seed, 0x9e1d);
    std::vector<double> pts = pts_;
    const double a = lo();
    const double b = hi();
    for (std::size_t i = 0; i < count; ++i) pts.push_back(a + (b - a) * kernels::uniform_open(rng));
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    Grid g(std::move(pts));
    std::ostringstream os;
    os << label_ << " + " << count << " random (seed " << seed << ")";
    g.label_ = os.str();
    return g;
}

std::string Grid::describe() const { return label_; }

std::string to_string(Monotonicity m) {
    switch (m) {
        case Monotonicity::increasing: return "increasing";
        case Monotonicity::decreasing: return "decreasing";
        case Monotonicity::non_monotone: return "non-monotone";
        case Monotonicity::flat: return "flat-within-tolerance";
    }
    return "?";
}

double default_band(std::span<const double> values) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return 1e-7 * (1.0 + m);
}

MonotoneVerdict classify_monotone(const Grid& grid, std::span<const double> values, double band) {
    if (values.size() != grid.size()) throw DomainError("classify_monotone: size mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (std::isnan(values[i])) throw NumericalError("monotone_on_grid: NaN value", 0.0, grid[i]);
    }
    if (band < 0.0) band = default_band(values);
    MonotoneVerdict v;
    v.band = band;

    double tv = 0.0;
    double min_step = 0.0;
    double max_step = 0.0;
    std::size_t i_min = 0;
    std::size_t i_max = 0;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        const double d = values[i + 1] - values[i];
        tv += std::abs(d);
        if (i == 0 || d < min_step) {
            min_step = d;
            i_min = i;
        }
        if (i == 0 || d > max_step) {
            max_step = d;
            i_max = i;
        }
    }
    if (tv <= band) {
        v.kind = Monotonicity::flat;
        return v;
    }
    const bool up_ok = min_step >= -band;
    const bool down_ok = max_step <= band;
    if (up_ok && max_step > band) {
        v.kind = Monotonicity::increasing;
    } else if (down_ok && min_step < -band) {
        v.kind = Monotonicity::decreasing;
    } else if (up_ok && down_ok) {
        // Every step is within the band but the accumulated drift is not.
        v.kind = values.back() >= values.front() ? Monotonicity::increasing : Monotonicity::decreasing;
    } else {
        v.kind = Monotonicity::non_monotone;
        const bool trend_up = values.back() >= values.front();
        const std::size_t w = trend_up ? i_min : i_max;
        v.witness = std::make_pair(grid[w], grid[w + 1]);
    }
    return v;
}

MonotoneVerdict monotone_on_grid(RealFn f, const Grid& grid, double band) {
    const auto values = kernels::map(grid.points(), [&](double x) { return f(x); });
    return classify_monotone(grid, values, band);
}

double log_factorial(unsigned k) {
    static const std::array<double, 1025> table = [] {
        std::array<double, 1025> t{};
        long double acc = 0.0L;
        t[0] = 0.0;
        for (std::size_t i = 1; i < t.size(); ++i) {
            acc += std::log(static_cast<long double>(i));
            t[i] = static_cast<double>(acc);
        }
        return t;
    }();
    if (k < table.size()) return table[k];
    // Stirling series for log Gamma(k+1).
    const double n = static_cast<double>(k) + 1.0;
    const double inv = 1.0 / n;
    const double inv2 = inv * inv;
    return (n - 0.5) * std::log(n) - n + 0.5 * std::log(2.0 * std::numbers::pi) +
           inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0));
}

double log_poisson_weight(unsigned k, double L) {
    if (std::isnan(L) || L < 0.0) throw DomainError("log_poisson_weight: L must be non-negative", L);
    if (L == 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    if (k == 0) return 0.0;
    return static_cast<double>(k) * std::log(L) - log_factorial(k);
}

}  // namespace wmit
