#include "wmit/weights.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <memory>
#include <sstream>

#include "wmit/errors.hpp"
#include "wmit/inactivity.hpp"
#include "wmit/kernels.hpp"

namespace wmit {

std::string to_string(Convexity c) {
    switch (c) {
        case Convexity::convex: return "convex";
        case Convexity::concave: return "concave";
        case Convexity::affine: return "affine";
        case Convexity::neither: return "neither";
        case Convexity::unknown: return "unknown";
    }
    return "?";
}

WeightFn::WeightFn(std::string kind, std::function<double(double)> phi, std::function<double(double)> psi,
                   Convexity declared, bool psi_finite)
    : kind_(std::move(kind)), phi_(std::move(phi)), psi_(std::move(psi)), declared_(declared), psi_finite_(psi_finite) {
    if (!phi_) throw ConfigError("weight: phi is required");
}

WeightFn WeightFn::custom(std::string kind, std::function<double(double)> phi) {
    auto ph = std::make_shared<std::function<double(double)>>(phi);
    auto psi = [ph](double x) {
        if (x <= 0.0) return 0.0;
        auto g = [&](double u) { return (*ph)(u); };
        return integrate(g, 0.0, x, 1e-11 * std::max(1.0, x)).value;
    };
    return WeightFn(std::move(kind), std::move(phi), psi, Convexity::unknown);
}

double WeightFn::psi(double x) const {
    if (!psi_finite_ || !psi_) throw DomainError(kind_ + ": cumulative weight psi is infinite");
    if (x <= 0.0) return 0.0;
    return psi_(x);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Distribution need_ctx(const std::string& kind, const std::optional<Distribution>& ctx) {
    if (!ctx) throw ConfigError("weight kind '" + kind + "' needs a context distribution");
    return *ctx;
}

Distribution need_pdf(const std::string& kind, const Distribution& d) {
    if (!d.has_pdf()) throw UnsupportedError("weight kind '" + kind + "' needs a context density");
    return d;
}

// tau of the context; zero where the context CDF vanishes.
double safe_tau(const Distribution& d, double x) {
    const double F = d.cdf(x);
    if (!(F > 0.0)) return 0.0;
    return d.pdf(x) / F;
}

}  // namespace

std::vector<std::string> weight_kinds() {
    return {"identity", "power", "half-square", "cdf-of", "hazard-of", "odds-of", "neglog-density", "mit-of", "rhr-of"};
}

bool weight_needs_ctx(const std::string& kind) { return kind.ends_with("-of") || kind == "neglog-density"; }

WeightFn make_weight(const std::string& kind, std::optional<Distribution> ctx, std::optional<double> r) {
    if (kind == "identity") {
        return WeightFn("identity", [](double) { return 1.0; }, [](double x) { return x; }, Convexity::affine);
    }
    if (kind == "power") {
        const double p = r.value_or(2.0);
        if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("power weight: r must be positive", p);
        const Convexity c = p == 1.0 ? Convexity::affine : (p > 1.0 ? Convexity::convex : Convexity::concave);
        WeightFn w(
            "power", [p](double x) { return x <= 0.0 ? (p == 1.0 ? 1.0 : (p > 1.0 ? 0.0 : kInf)) : p * std::pow(x, p - 1.0); },
            [p](double x) { return std::pow(x, p); }, c);
        w.details.emplace_back("r", std::to_string(p));
        return w;
    }
    if (kind == "half-square") {
        return WeightFn("half-square", [](double x) { return std::max(x, 0.0); }, [](double x) { return 0.5 * x * x; },
                        Convexity::convex);
    }
    if (kind == "cdf-of") {
        const Distribution g = need_pdf(kind, need_ctx(kind, ctx));
        WeightFn w("cdf-of", [g](double x) { return g.pdf(x); }, [g](double x) { return g.cdf(x); }, Convexity::unknown);
        w.details.emplace_back("ctx", g.name());
        return w;
    }
    if (kind == "hazard-of") {
        const Distribution g = need_pdf(kind, need_ctx(kind, ctx));
        WeightFn w(
            "hazard-of",
            [g](double x) {
                const double s = g.sf(x);
                return s > 0.0 ? g.pdf(x) / s : 0.0;
            },
            [g](double x) { return -std::log(g.sf(x)); }, Convexity::unknown);
        w.details.emplace_back("ctx", g.name());
        return w;
    }
    if (kind == "odds-of") {
        const Distribution g = need_ctx(kind, ctx);
        WeightFn w(
            "odds-of",
            [g](double x) {
                const double F = g.cdf(x);
                return F > 0.0 ? g.sf(x) / F : kInf;
            },
            {}, Convexity::unknown, false);
        w.details.emplace_back("ctx", g.name());
        return w;
    }
    if (kind == "rhr-of") {
        const Distribution g = need_pdf(kind, need_ctx(kind, ctx));
        const double c = r.value_or(1.0);
        if (!(c > 0.0)) throw DomainError("rhr-of weight: c must be positive", c);
        WeightFn w("rhr-of", [g, c](double x) { return c * safe_tau(g, x); }, {}, Convexity::unknown, false);
        w.details.emplace_back("ctx", g.name());
        w.details.emplace_back("c", std::to_string(c));
        return w;
    }
    if (kind == "mit-of") {
        const Distribution g = need_pdf(kind, need_ctx(kind, ctx));
        WeightFn w(
            "mit-of",
            [g](double x) {
                if (!(g.cdf(x) >= kCdfFloor)) return 0.0;
                return safe_tau(g, x) * mit(g, x);
            },
            [g](double x) {
                if (!(g.cdf(x) >= kCdfFloor)) return 0.0;
                return x - mit(g, x);
            },
            Convexity::unknown);
        w.details.emplace_back("ctx", g.name());
        return w;
    }
    if (kind == "neglog-density") {
        const Distribution g = need_pdf(kind, need_ctx(kind, ctx));
        const double x0 = std::max(g.support().lower, 1e-12);
        const double f0 = g.pdf(x0);
        if (!(f0 > 0.0 && std::isfinite(f0))) {
            throw PreconditionViolation("neglog-density: need 0 < f(0) < infinity", x0);
        }
        // Decreasing density, checked on a grid.
        const Grid grid = quantile_grid(g, 256, 1e-6, 1.0 - 1e-6);
        const auto vals = kernels::map(grid.points(), [&](double x) { return g.pdf(x); });
        const auto v = classify_monotone(grid, vals);
        if (!v.is_decreasing_weakly()) {
            double wit = grid[0];
            for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
                if (vals[i + 1] - vals[i] > v.band) {
                    wit = grid[i];
                    break;
                }
            }
            std::ostringstream os;
            os << "neglog-density: density of " << g.name() << " is not decreasing (f' > 0 near x=" << wit << ")";
            throw PreconditionViolation(os.str(), wit);
        }
        WeightFn w(
            "neglog-density",
            [g](double x) {
                const double h = 1e-6 * std::max(1.0, x);
                const double lo = std::max(x - h, g.support().lower + 1e-300);
                const double hi = x + h;
                const double fl = g.pdf(lo);
                const double fh = g.pdf(hi);
                if (!(fl > 0.0 && fh > 0.0)) return 0.0;
                return std::max(0.0, -(std::log(fh) - std::log(fl)) / (hi - lo));
            },
            [g, f0](double x) {
                const double f = g.pdf(x);
                if (!(f > 0.0)) throw DomainError("neglog-density: density vanishes", x);
                return std::max(0.0, -std::log(f / f0));
            },
            Convexity::unknown);
        w.details.emplace_back("ctx", g.name());
        return w;
    }
    throw ConfigError("unknown weight kind '" + kind + "'");
}

std::pair<double, double> check_bounds(const WeightFn& w, const Grid& grid) {
    const auto vals = kernels::map(grid.points(), [&](double x) { return w.phi(x); });
    double m = vals[0];
    double M = vals[0];
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (std::isnan(vals[i])) throw NumericalError("check_bounds: phi is NaN", 0.0, grid[i]);
        m = std::min(m, vals[i]);
        M = std::max(M, vals[i]);
    }
    return {m, M};
}

ConvexityCertificate certify_convexity(const WeightFn& w, double lo, double hi, std::uint64_t seed) {
    ConvexityCertificate cert;
    if (w.declared_convexity() != Convexity::unknown) {
        cert.kind = w.declared_convexity();
        cert.declared = true;
        return cert;
    }
    if (!w.psi_finite()) return cert;
    if (!(lo < hi)) throw DomainError("certify_convexity: empty range");
    constexpr std::size_t kPairs = 512;
    auto rng = kernels::make_stream(seed, 0xc0de);
    bool convex = true;
    bool concave = true;
    double scale = 0.0;
    std::vector<std::array<double, 3>> trip;
    trip.reserve(kPairs);
    auto test = [&](double a, double b) {
        const double pa = w.psi(a);
        const double pb = w.psi(b);
        const double pm = w.psi(0.5 * (a + b));
        scale = std::max({scale, std::abs(pa), std::abs(pb)});
        trip.push_back({pa, pb, pm});
    };
    // Log-uniform draws when the range allows it, so every scale of a long range is probed.
    const bool logs = lo > 0.0;
    auto draw = [&] {
        const double u = kernels::uniform_open(rng);
        return logs ? lo * std::pow(hi / lo, u) : lo + (hi - lo) * u;
    };
    for (std::size_t i = 0; i < kPairs; ++i) test(draw(), draw());
    // Neighbouring pairs on a fixed grid catch curvature changes confined to a short stretch.
    const Grid g = logs ? Grid::logarithmic(lo, hi, 257) : Grid::uniform(lo, hi, 257);
    for (std::size_t i = 0; i + 2 < g.size(); ++i) test(g[i], g[i + 2]);
    const double band = 1e-9 * (1.0 + scale);
    bool strict_any = false;
    for (const auto& [pa, pb, pm] : trip) {
        const double gap = 0.5 * (pa + pb) - pm;  // >= 0 for convex
        if (gap < -band) convex = false;
        if (gap > band) concave = false;
        if (std::abs(gap) > band) strict_any = true;
    }
    cert.pairs = trip.size();
    if (!strict_any) {
        cert.kind = Convexity::affine;
    } else if (convex) {
        cert.kind = Convexity::convex;
    } else if (concave) {
        cert.kind = Convexity::concave;
    } else {
        cert.kind = Convexity::neither;
    }
    return cert;
}

}  // namespace wmit
