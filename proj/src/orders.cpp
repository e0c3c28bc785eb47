#include "wmit/orders.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "wmit/errors.hpp"
#include "wmit/inactivity.hpp"
#include "wmit/infomeasures.hpp"

namespace wmit {

std::string to_string(VerdictKind k) {
    switch (k) {
        case VerdictKind::holds: return "holds";
        case VerdictKind::fails: return "fails";
        case VerdictKind::inconclusive: return "inconclusive";
    }
    return "?";
}

std::vector<std::string> order_kinds() { return {"st", "hr", "rhr", "mit", "wmit", "smit", "disp", "lir"}; }

Grid default_order_grid(const Distribution& x, const Distribution& y, std::uint64_t seed, double p_lo, double p_hi) {
    const double lo = std::max(std::min(x.quantile(p_lo), y.quantile(p_lo)), 1e-12);
    const double hi = std::max(x.quantile(p_hi), y.quantile(p_hi));
    return Grid::logarithmic(lo, hi, 512).with_random_points(64, seed);
}

namespace {

constexpr double kRel = 1e-7;

struct Pointwise {
    std::vector<double> t;
    std::vector<double> lhs;  // required lhs <= rhs
    std::vector<double> rhs;
    std::vector<double> err;  // extra per-point slack
};

// Pointwise verdict: fails if lhs > rhs + margin anywhere, holds if rhs > lhs + margin somewhere.
void decide_pointwise(OrderVerdict& v, const Pointwise& p) {
    double scale = 0.0;
    for (std::size_t i = 0; i < p.t.size(); ++i) scale = std::max({scale, std::abs(p.lhs[i]), std::abs(p.rhs[i])});
    const double base = kRel * (1.0 + scale);
    v.margin = base;
    v.compared = p.t.size();
    double worst = 0.0;
    bool strict = false;
    for (std::size_t i = 0; i < p.t.size(); ++i) {
        const double m = base + p.err[i];
        const double gap = p.rhs[i] - p.lhs[i];
        if (gap < -m) {
            const double excess = -gap - m;
            if (!v.witness || excess > worst) {
                worst = excess;
                v.witness = Witness{p.t[i], p.lhs[i], p.rhs[i], std::nullopt};
            }
        } else if (gap > m) {
            strict = true;
        }
    }
    v.kind = v.witness ? VerdictKind::fails : (strict ? VerdictKind::holds : VerdictKind::inconclusive);
}

// Monotone-ratio verdict via cross-products: for i < j require a[i] * b[j] <= a[j] * b[i]
// (i.e. a/b increasing). err[i] bounds the absolute error of a[i] and b[i].
void decide_pairwise(OrderVerdict& v, const std::vector<double>& t, const std::vector<double>& a,
                     const std::vector<double>& b, const std::vector<double>& err, kernels::Exec exec) {
    const std::size_t n = t.size();
    v.compared = n;
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max({scale, std::abs(a[i]), std::abs(b[i])});
    const double base = kRel * (1.0 + scale * scale);
    v.margin = base;
    // Per row: most negative normalized excess and whether a strict increase was seen.
    std::vector<double> row_worst(n, 0.0);
    std::vector<double> row_j(n, -1.0);
    const auto strict = kernels::generate(
        n,
        [&](std::size_t i) {
            double any = 0.0;
            for (std::size_t j = i + 1; j < n; ++j) {
                const double lhs = a[i] * b[j];
                const double rhs = a[j] * b[i];
                const double m = base + 2.0 * (err[i] + err[j]) * (1.0 + scale);
                const double gap = rhs - lhs;
                if (gap < -m) {
                    if (-gap - m > row_worst[i]) {
                        row_worst[i] = -gap - m;
                        row_j[i] = static_cast<double>(j);
                    }
                } else if (gap > m) {
                    any = 1.0;
                }
            }
            return any;
        },
        exec);
    std::size_t wi = n;
    for (std::size_t i = 0; i < n; ++i) {
        if (row_j[i] >= 0.0 && (wi == n || row_worst[i] > row_worst[wi])) wi = i;
    }
    if (wi < n) {
        const auto j = static_cast<std::size_t>(row_j[wi]);
        v.witness = Witness{t[wi], a[wi] * b[j], a[j] * b[wi], t[j]};
        v.kind = VerdictKind::fails;
        return;
    }
    const bool any = std::any_of(strict.begin(), strict.end(), [](double s) { return s > 0.0; });
    v.kind = any ? VerdictKind::holds : VerdictKind::inconclusive;
}

// Error bound on wmit from an absolute cdf error e.
double wmit_error(double e, double F, double m, double psi_t) {
    if (e <= 0.0) return 0.0;
    return e * (psi_t + m) / F;
}

std::vector<double> retained(const Grid& grid, const std::function<bool(double)>& keep, std::size_t& dropped) {
    std::vector<double> pts;
    for (double t : grid.points()) {
        if (keep(t)) pts.push_back(t);
    }
    dropped = grid.size() - pts.size();
    return pts;
}

}  // namespace

OrderVerdict check_order(const std::string& kind, const Distribution& x, const Distribution& y,
                         const std::optional<WeightFn>& w_in, const Grid& grid, const OrderOptions& opt) {
    const auto kinds = order_kinds();
    if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end()) {
        throw ConfigError("unknown order kind '" + kind + "'");
    }
    if (kind == "wmit" && !w_in) throw ConfigError("order kind 'wmit' needs a weight");

    OrderVerdict v;
    v.order = kind;
    v.x = x.name();
    v.y = y.name();
    v.grid = grid.describe();

    if (x.same_law(y)) {
        v.kind = VerdictKind::holds;
        v.margin = 0.0;
        v.compared = grid.size();
        return v;
    }

    const double ex = x.cdf_error();
    const double ey = y.cdf_error();

    if (kind == "st") {
        Pointwise p;
        p.t.assign(grid.points().begin(), grid.points().end());
        p.lhs = kernels::map(p.t, [&](double t) { return y.cdf(t); }, opt.exec);
        p.rhs = kernels::map(p.t, [&](double t) { return x.cdf(t); }, opt.exec);
        p.err.assign(p.t.size(), ex + ey);
        decide_pointwise(v, p);
        return v;
    }
    if (kind == "rhr" || kind == "hr") {
        const bool rhr = kind == "rhr";
        auto fx = [&](double t) { return rhr ? x.cdf(t) : x.sf(t); };
        auto fy = [&](double t) { return rhr ? y.cdf(t) : y.sf(t); };
        const auto pts = retained(grid, [&](double t) { return fx(t) >= kCdfFloor && fy(t) >= kCdfFloor; }, v.dropped);
        const auto a = kernels::map(pts, fy, opt.exec);
        const auto b = kernels::map(pts, fx, opt.exec);
        std::vector<double> err(pts.size(), ex + ey);
        if (rhr) {
            decide_pairwise(v, pts, a, b, err, opt.exec);
        } else {
            decide_pairwise(v, pts, a, b, err, opt.exec);
        }
        return v;
    }
    if (kind == "mit" || kind == "wmit" || kind == "smit") {
        const WeightFn w = kind == "mit" ? make_weight("identity") : (kind == "smit" ? make_weight("half-square") : *w_in);
        const auto pts = retained(grid, [&](double t) { return x.cdf(t) >= kCdfFloor && y.cdf(t) >= kCdfFloor; }, v.dropped);
        if (pts.size() < 3) throw DomainError("check_order: fewer than 3 grid points in the common domain");
        const Grid g = Grid::from_points(pts);
        Pointwise p;
        p.t = pts;
        p.rhs = wmit_curve(x, w, g, opt.tol, opt.exec);
        p.lhs = wmit_curve(y, w, g, opt.tol, opt.exec);
        p.err.resize(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double psi_t = w.psi_finite() ? w.psi(pts[i]) : 0.0;
            p.err[i] = wmit_error(ex, x.cdf(pts[i]), p.rhs[i], psi_t) + wmit_error(ey, y.cdf(pts[i]), p.lhs[i], psi_t);
        }
        decide_pointwise(v, p);
        return v;
    }
    if (kind == "disp") {
        const auto pts = retained(
            grid,
            [&](double t) {
                const double F = x.cdf(t);
                return F >= kCdfFloor && x.sf(t) >= kCdfFloor;
            },
            v.dropped);
        const auto vals = kernels::map(
            pts,
            [&](double t) {
                const double F = x.cdf(t);
                const double q = F > 0.5 ? y.isf(x.sf(t)) : y.quantile(F);
                return q - t;
            },
            opt.exec);
        // v increasing <=> for i < j: v_i * 1 <= v_j * 1; use the pointwise-pair form directly.
        const std::size_t n = pts.size();
        double scale = 0.0;
        for (double z : vals) scale = std::max(scale, std::abs(z));
        const double base = kRel * (1.0 + scale);
        v.margin = base;
        v.compared = n;
        double worst = 0.0;
        bool strict = false;
        double running_max = -std::numeric_limits<double>::infinity();
        std::size_t arg_max = 0;
        double running_min_after = 0.0;
        (void)running_min_after;
        for (std::size_t j = 0; j < n; ++j) {
            if (j > 0) {
                const double gap = vals[j] - running_max;  // worst pair ending at j
                if (gap < -base) {
                    if (-gap - base > worst) {
                        worst = -gap - base;
                        v.witness = Witness{pts[arg_max], running_max, vals[j], pts[j]};
                    }
                }
                if (vals[j] - vals[0] > base) strict = true;
            }
            if (vals[j] > running_max) {
                running_max = vals[j];
                arg_max = j;
            }
        }
        v.kind = v.witness ? VerdictKind::fails : (strict ? VerdictKind::holds : VerdictKind::inconclusive);
        return v;
    }
    // lir: mit_X(F^-1(p)) <= mit_Y(G^-1(p)) on a p-grid.
    const Grid pg = Grid::uniform(opt.p_lo, opt.p_hi, opt.p_points);
    v.grid = pg.describe() + " (p)";
    Pointwise p;
    p.t.assign(pg.points().begin(), pg.points().end());
    p.lhs = kernels::map(p.t, [&](double q) { return mit(x, x.quantile(q), opt.tol); }, opt.exec);
    p.rhs = kernels::map(p.t, [&](double q) { return mit(y, y.quantile(q), opt.tol); }, opt.exec);
    p.err.assign(p.t.size(), 0.0);
    decide_pointwise(v, p);
    return v;
}

CountLaw::CountLaw(std::vector<double> pmf, std::string name) : pmf_(std::move(pmf)), name_(std::move(name)) {
    cum_.resize(pmf_.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < pmf_.size(); ++k) {
        acc += pmf_[k];
        cum_[k] = acc;
    }
}

CountLaw CountLaw::deterministic(unsigned m) {
    std::vector<double> p(m + 1, 0.0);
    p[m] = 1.0;
    return CountLaw(std::move(p), "deterministic(" + std::to_string(m) + ")");
}

CountLaw CountLaw::geometric(double q) {
    if (!(q > 0.0 && q <= 1.0)) throw DomainError("geometric: q must lie in (0,1]", q);
    std::vector<double> p{0.0};
    double tail = 1.0;  // P(N >= k)
    for (unsigned k = 1; tail > 1e-12 && k < 100000; ++k) {
        const double mass = q * tail;
        p.push_back(mass);
        tail -= mass;
    }
    p.back() += tail;  // fold the truncated tail into the last mass
    std::ostringstream os;
    os << "geometric(" << q << ")";
    return CountLaw(std::move(p), os.str());
}

CountLaw CountLaw::from_pmf(std::vector<double> pmf, std::string name) {
    if (pmf.empty()) throw ConfigError("count law: empty mass function");
    double s = 0.0;
    for (double m : pmf) {
        if (!(m >= 0.0)) throw ConfigError("count law: negative mass");
        s += m;
    }
    if (std::abs(s - 1.0) > 1e-10) throw ConfigError("count law: masses sum to " + std::to_string(s) + ", not 1");
    return CountLaw(std::move(pmf), std::move(name));
}

double CountLaw::cdf(unsigned k) const { return k < cum_.size() ? cum_[k] : 1.0; }

double CountLaw::at_least(unsigned k) const {
    if (k == 0) return 1.0;
    return 1.0 - cdf(k - 1);
}

OrderVerdict discrete_order_check(const std::string& kind, const CountLaw& n1, const CountLaw& n2) {
    if (kind != "rhr" && kind != "hr") throw ConfigError("discrete order kind must be rhr or hr");
    OrderVerdict v;
    v.order = kind;
    v.x = n1.name();
    v.y = n2.name();
    const unsigned K = std::max(n1.max_k(), n2.max_k()) + 1;
    std::ostringstream os;
    os << "k = 0.." << K;
    v.grid = os.str();
    if (n1.masses() == n2.masses()) {
        v.kind = VerdictKind::holds;
        v.compared = K + 1;
        return v;
    }
    std::vector<double> t(K + 1);
    std::vector<double> a(K + 1);
    std::vector<double> b(K + 1);
    for (unsigned k = 0; k <= K; ++k) {
        t[k] = k;
        a[k] = kind == "rhr" ? n2.cdf(k) : n2.at_least(k);
        b[k] = kind == "rhr" ? n1.cdf(k) : n1.at_least(k);
    }
    // Cross-products; undefined ratios (both zero) compare as 0 = 0.
    std::vector<double> err(t.size(), 0.0);
    decide_pairwise(v, t, a, b, err, kernels::Exec::serial);
    v.margin = 1e-12;
    return v;
}

void finalize(ImplicationResult& r) {
    r.antecedent_holds = std::all_of(r.antecedents.begin(), r.antecedents.end(),
                                     [](const OrderVerdict& v) { return v.satisfied(); });
    bool refuted = false;
    for (const auto& c : r.order_consequents) refuted = refuted || c.fails();
    for (const auto& c : r.scalar_consequents) refuted = refuted || !c.holds();
    r.violation = r.antecedent_holds && refuted;
}

ImplicationReport implication_suite(const Distribution& x, const Distribution& y, const WeightFn& w, const Grid& grid,
                                    const OrderOptions& opt) {
    ImplicationReport rep;
    // Antecedents are refuted on a wider grid than the consequents are checked on: an order that
    // fails only in the far lower tail must not pass as satisfied.
    std::vector<double> pts(grid.points().begin(), grid.points().end());
    const double wlo = std::max(std::min(x.quantile(1e-8), y.quantile(1e-8)), 1e-300);
    const double whi = std::max(x.quantile(1.0 - 1e-8), y.quantile(1.0 - 1e-8));
    const Grid extra = Grid::logarithmic(wlo, whi, 256);
    pts.insert(pts.end(), extra.points().begin(), extra.points().end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const Grid wide = Grid::from_points(std::move(pts));
    OrderOptions wide_p = opt;
    wide_p.p_lo = 1e-6;
    wide_p.p_hi = 1.0 - 1e-6;
    wide_p.p_points = 397;

    const auto wmit_v = check_order("wmit", x, y, w, grid, opt);

    {
        ImplicationResult r;
        r.theorem = "rhr implies wmit";
        r.antecedents.push_back(check_order("rhr", x, y, std::nullopt, wide, opt));
        r.order_consequents.push_back(wmit_v);
        finalize(r);
        rep.results.push_back(std::move(r));
    }
    {
        ImplicationResult r;
        r.theorem = "wmit and convex psi imply mit";
        r.antecedents.push_back(check_order("wmit", x, y, w, wide, opt));
        const auto cert = certify_convexity(w, grid.lo(), grid.hi());
        r.conditions.push_back("psi " + to_string(cert.kind) + (cert.declared ? " (declared)" : " (grid-certified)"));
        r.order_consequents.push_back(check_order("mit", x, y, std::nullopt, grid, opt));
        finalize(r);
        if (!is_convex(cert.kind)) {
            r.antecedent_holds = false;
            r.violation = false;
        }
        rep.results.push_back(std::move(r));
    }
    {
        ImplicationResult r;
        r.theorem = "lir implies variance and GCE ordering";
        r.antecedents.push_back(check_order("lir", x, y, std::nullopt, grid, wide_p));
        const WeightFn id = make_weight("identity");
        const auto vx = variance_of_weighted(x, id);
        const auto vy = variance_of_weighted(y, id);
        r.scalar_consequents.push_back(
            {"Var(X) <= Var(Y)", vx.direct, vy.direct, 1e-7 * (1.0 + std::abs(vx.direct) + std::abs(vy.direct))});
        for (int n = 1; n <= 3; ++n) {
            const double cx = gce(x, n);
            const double cy = gce(y, n);
            r.scalar_consequents.push_back(
                {"CE_" + std::to_string(n) + "(X) <= CE_" + std::to_string(n) + "(Y)", cx, cy,
                 1e-7 * (1.0 + std::abs(cx) + std::abs(cy))});
        }
        finalize(r);
        rep.results.push_back(std::move(r));
    }
    return rep;
}

}  // namespace wmit
