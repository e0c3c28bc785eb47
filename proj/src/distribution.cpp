#include "wmit/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wmit/errors.hpp"
#include "wmit/kernels.hpp"

namespace wmit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_p(double p, const char* who) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError(std::string(who) + ": probability must lie in (0,1)", p);
    }
}

// Upper bracket for numerical inversion on unbounded support.
double grow_bracket(const DistributionModel& m, double lo, double target_sf) {
    double hi = std::max(1.0, 2.0 * std::abs(lo) + 1.0);
    for (int i = 0; i < 2000; ++i) {
        if (m.sf(hi) <= target_sf) return hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) break;
    }
    throw NumericalError(m.family() + ": could not bracket the quantile", hi);
}

}  // namespace

double DistributionModel::log_cdf(double x) const {
    const double F = cdf(x);
    if (F > 0.5) return std::log1p(-sf(x));
    return std::log(F);
}

double DistributionModel::pdf(double) const {
    throw UnsupportedError(family() + ": no density available");
}

double DistributionModel::quantile(double p) const {
    require_p(p, "quantile");
    const Support s = support();
    double hi = s.upper;
    if (!std::isfinite(hi)) hi = grow_bracket(*this, s.lower, 1.0 - p);
    auto F = [this](double x) { return cdf(x); };
    if (has_pdf()) {
        auto f = [this](double x) { return pdf(x); };
        return invert_cdf(F, p, s.lower, hi, 1e-12, RealFn(f));
    }
    return invert_cdf(F, p, s.lower, hi, 1e-12);
}

double DistributionModel::isf(double q) const {
    require_p(q, "isf");
    if (q > 1e-3) return quantile(1.0 - q);
    // Bisection on the survival function directly to keep relative accuracy in the tail.
    const Support s = support();
    double lo = s.lower;
    double hi = std::isfinite(s.upper) ? s.upper : grow_bracket(*this, s.lower, q);
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (sf(mid) <= q) {
            hi = mid;
        } else {
            lo = mid;
        }
        if (hi - lo <= 1e-13 * std::abs(hi)) break;
    }
    return hi;
}

namespace {

// Clamps x to the support; returns true when x is outside and `out` holds the cdf.
bool outside(double x, const Support& s, double& out) {
    if (std::isnan(x)) throw DomainError("distribution evaluated at NaN");
    if (x <= s.lower) {
        out = 0.0;
        return true;
    }
    if (x >= s.upper) {
        out = 1.0;
        return true;
    }
    return false;
}

class Uniform final : public DistributionModel {
  public:
    explicit Uniform(double b) : b_(b) {}
    double cdf(double x) const override {
        double c;
        return outside(x, support(), c) ? c : x / b_;
    }
    double sf(double x) const override { return 1.0 - cdf(x); }
    double log_cdf(double x) const override { return std::log(cdf(x)); }
    bool has_pdf() const override { return true; }
    double pdf(double x) const override { return x > 0.0 && x < b_ ? 1.0 / b_ : 0.0; }
    double quantile(double p) const override {
        require_p(p, "quantile");
        return b_ * p;
    }
    double isf(double q) const override {
        require_p(q, "isf");
        return b_ * (1.0 - q);
    }
    Support support() const override { return {0.0, b_}; }
    std::string family() const override { return "uniform"; }
    ParamList params() const override { return {{"b", b_}}; }

  private:
    double b_;
};

class Exponential final : public DistributionModel {
  public:
    explicit Exponential(double rate) : r_(rate) {}
    double cdf(double x) const override { return x <= 0.0 ? 0.0 : -std::expm1(-r_ * x); }
    double sf(double x) const override { return x <= 0.0 ? 1.0 : std::exp(-r_ * x); }
    double log_cdf(double x) const override {
        return x <= 0.0 ? -kInf : std::log(-std::expm1(-r_ * x));
    }
    bool has_pdf() const override { return true; }
    double pdf(double x) const override { return x < 0.0 ? 0.0 : r_ * std::exp(-r_ * x); }
    double quantile(double p) const override {
        require_p(p, "quantile");
        return -std::log1p(-p) / r_;
    }
    double isf(double q) const override {
        require_p(q, "isf");
        return -std::log(q) / r_;
    }
    Support support() const override { return {0.0, kInf}; }
    std::string family() const override { return "exponential"; }
    ParamList params() const override { return {{"rate", r_}}; }

  private:
    double r_;
};

class Frechet final : public DistributionModel {
  public:
    Frechet(double c, double g) : c_(c), g_(g) {}
    double cdf(double x) const override { return x <= 0.0 ? 0.0 : std::exp(-c_ * std::pow(x, -g_)); }
    double sf(double x) const override { return x <= 0.0 ? 1.0 : -std::expm1(-c_ * std::pow(x, -g_)); }
    double log_cdf(double x) const override { return x <= 0.0 ? -kInf : -c_ * std::pow(x, -g_); }
    bool has_pdf() const override { return true; }
    double pdf(double x) const override {
        if (x <= 0.0) return 0.0;
        const double z = c_ * std::pow(x, -g_);
        return g_ * z / x * std::exp(-z);
    }
    double quantile(double p) const override {
        require_p(p, "quantile");
        return std::pow(c_ / -std::log(p), 1.0 / g_);
    }
    double isf(double q) const override {
        require_p(q, "isf");
        return std::pow(c_ / -std::log1p(-q), 1.0 / g_);
    }
    Support support() const override { return {0.0, kInf}; }
    std::string family() const override { return "frechet"; }
    ParamList params() const override { return {{"c", c_}, {"gamma", g_}}; }

  private:
    double c_;
    double g_;
};

// F(x) = (x/b)^a on [0, b].
class Power final : public DistributionModel {
  public:
    Power(double a, double b) : a_(a), b_(b) {}
    double cdf(double x) const override {
        double c;
        return outside(x, support(), c) ? c : std::pow(x / b_, a_);
    }
    double log_cdf(double x) const override {
        if (x <= 0.0) return -kInf;
        if (x >= b_) return 0.0;
        return a_ * std::log(x / b_);
    }
    bool has_pdf() const override { return true; }
    double pdf(double x) const override {
        if (x <= 0.0 || x >= b_) return 0.0;
        return a_ / b_ * std::pow(x / b_, a_ - 1.0);
    }
    double quantile(double p) const override {
        require_p(p, "quantile");
        return b_ * std::pow(p, 1.0 / a_);
    }
    double isf(double q) const override {
        require_p(q, "isf");
        return b_ * std::exp(std::log1p(-q) / a_);
    }
    Support support() const override { return {0.0, b_}; }
    std::string family() const override { return "power"; }
    ParamList params() const override { return {{"a", a_}, {"b", b_}}; }

  private:
    double a_;
    double b_;
};

class Weibull final : public DistributionModel {
  public:
    Weibull(double k, double s) : k_(k), s_(s) {}
    double z(double x) const { return std::pow(x / s_, k_); }
    double cdf(double x) const override { return x <= 0.0 ? 0.0 : -std::expm1(-z(x)); }
    double sf(double x) const override { return x <= 0.0 ? 1.0 : std::exp(-z(x)); }
    double log_cdf(double x) const override { return x <= 0.0 ? -kInf : std::log(-std::expm1(-z(x))); }
    bool has_pdf() const override { return true; }
    double pdf(double x) const override {
        if (x < 0.0) return 0.0;
        if (x == 0.0) return k_ < 1.0 ? kInf : (k_ == 1.0 ? 1.0 / s_ : 0.0);
        return k_ / s_ * std::pow(x / s_, k_ - 1.0) * std::exp(-z(x));
    }
    double quantile(double p) const override {
        require_p(p, "quantile");
        return s_ * std::pow(-std::log1p(-p), 1.0 / k_);
    }
    double isf(double q) const override {
        require_p(q, "isf");
        return s_ * std::pow(-std::log(q), 1.0 / k_);
    }
    Support support() const override { return {0.0, kInf}; }
    std::string family() const override { return "weibull"; }
    ParamList params() const override { return {{"shape", k_}, {"scale", s_}}; }

  private:
    double k_;
    double s_;
};

class Erlang final : public DistributionModel {
  public:
    Erlang(unsigned k, double rate) : k_(k), r_(rate) {}
    // sum_{j<k} (rx)^j / j!
    double partial(double y) const {
        double term = 1.0;
        double acc = 1.0;
        for (unsigned j = 1; j < k_; ++j) {
            term *= y / j;
            acc += term;
        }
        return acc;
    }
    double sf(double x) const override {
        if (x <= 0.0) return 1.0;
        const double y = r_ * x;
        return std::exp(-y) * partial(y);
    }
    double cdf(double x) const override {
        if (x <= 0.0) return 0.0;
        const double y = r_ * x;
        if (y < 1.0) {
            // Tail series sum_{j>=k} e^-y y^j/j! avoids cancellation near 0.
            double term = std::exp(-y - log_factorial(k_) + k_ * std::log(y));
            double acc = 0.0;
            for (unsigned j = k_; j < k_ + 200; ++j) {
                acc += term;
                term *= y / (j + 1);
                if (term < 1e-18 * acc) break;
            }
            return acc;
        }
        return 1.0 - sf(x);
    }
    bool has_pdf() const override { return true; }
    double pdf(double x) const override {
        if (x < 0.0) return 0.0;
        if (x == 0.0) return k_ == 1 ? r_ : 0.0;
        const double y = r_ * x;
        return r_ * std::exp((k_ - 1.0) * std::log(y) - y - log_factorial(k_ - 1));
    }
    Support support() const override { return {0.0, kInf}; }
    std::string family() const override { return "erlang"; }
    ParamList params() const override { return {{"k", static_cast<double>(k_)}, {"rate", r_}}; }

  private:
    unsigned k_;
    double r_;
};

// (1-w) Exp(1) + w Erlang(2,1): F = 1 - e^-x (1 + w x).
class ExpErlangMix final : public DistributionModel {
  public:
    explicit ExpErlangMix(double w) : w_(w) {}
    double sf(double x) const override { return x <= 0.0 ? 1.0 : std::exp(-x) * (1.0 + w_ * x); }
    double cdf(double x) const override {
        if (x <= 0.0) return 0.0;
        // 1 - e^-x - w x e^-x, written to keep accuracy near zero.
        return -std::expm1(-x) - w_ * x * std::exp(-x);
    }
    bool has_pdf() const override { return true; }
    double pdf(double x) const override { return x < 0.0 ? 0.0 : std::exp(-x) * (1.0 - w_ + w_ * x); }
    Support support() const override { return {0.0, kInf}; }
    std::string family() const override { return "exp-erlang-mix"; }
    ParamList params() const override { return {{"w", w_}}; }

  private:
    double w_;
};

class FunctionModel final : public DistributionModel {
  public:
    FunctionModel(std::string name, std::function<double(double)> cdf, Support s, std::function<double(double)> pdf,
                  double err)
        : name_(std::move(name)), cdf_(std::move(cdf)), pdf_(std::move(pdf)), s_(s), err_(err) {}
    double cdf(double x) const override {
        double c;
        if (outside(x, s_, c)) return c;
        return std::clamp(cdf_(x), 0.0, 1.0);
    }
    bool has_pdf() const override { return static_cast<bool>(pdf_); }
    double pdf(double x) const override {
        if (!pdf_) return DistributionModel::pdf(x);
        if (x <= s_.lower || x >= s_.upper) return 0.0;
        return pdf_(x);
    }
    Support support() const override { return s_; }
    std::string family() const override { return name_; }
    double cdf_error() const override { return err_; }

  private:
    std::string name_;
    std::function<double(double)> cdf_;
    std::function<double(double)> pdf_;
    Support s_;
    double err_;
};

class EmpiricalModel final : public DistributionModel {
  public:
    explicit EmpiricalModel(EmpiricalDistribution e) : e_(std::move(e)) {}
    double cdf(double x) const override { return e_.cdf(x); }
    double quantile(double p) const override { return e_.quantile(p); }
    double isf(double q) const override {
        require_p(q, "isf");
        return e_.quantile(1.0 - q);
    }
    Support support() const override { return {0.0, e_.sorted_samples().back()}; }
    std::string family() const override { return "empirical"; }
    ParamList params() const override { return {{"n", static_cast<double>(e_.size())}}; }

  private:
    EmpiricalDistribution e_;
};

double need(const std::map<std::string, double>& p, const std::string& fam, const std::string& key,
            std::optional<double> fallback = std::nullopt) {
    const auto it = p.find(key);
    if (it == p.end()) {
        if (fallback) return *fallback;
        throw ConfigError(fam + ": missing parameter '" + key + "'");
    }
    return it->second;
}

double positive(double v, const std::string& what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(what + " must be positive and finite", v);
    return v;
}

void only(const std::map<std::string, double>& p, const std::string& fam, std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : p) {
        if (std::find_if(keys.begin(), keys.end(), [&](const char* s) { return k == s; }) == keys.end()) {
            throw ConfigError(fam + ": unknown parameter '" + k + "'");
        }
    }
}

}  // namespace

Distribution::Distribution(std::shared_ptr<const DistributionModel> model) : m_(std::move(model)) {
    if (!m_) throw ConfigError("Distribution: null model");
}

Distribution Distribution::from_functions(std::string name, std::function<double(double)> cdf, Support support,
                                          std::function<double(double)> pdf, double cdf_error) {
    if (!cdf) throw ConfigError("from_functions: cdf is required");
    if (!(support.lower < support.upper)) throw DomainError("from_functions: empty support");
    return Distribution(std::make_shared<FunctionModel>(std::move(name), std::move(cdf), support, std::move(pdf),
                                                        cdf_error));
}

double Distribution::quantile(double p) const {
    require_p(p, "quantile");
    return m_->quantile(p);
}

double Distribution::isf(double q) const {
    require_p(q, "isf");
    return m_->isf(q);
}

std::string Distribution::name() const {
    std::ostringstream os;
    os << family() << "(";
    bool first = true;
    for (const auto& [k, v] : params()) {
        os << (first ? "" : ",") << k << "=" << v;
        first = false;
    }
    os << ")";
    return os.str();
}

double Distribution::effective_upper() const {
    const Support s = support();
    return std::isfinite(s.upper) ? s.upper : isf(kTailMass);
}

double Distribution::domain_floor() const {
    const Support s = support();
    if (cdf(s.lower) >= kCdfFloor) return s.lower;
    return std::max(s.lower, quantile(kCdfFloor));
}

double Distribution::mean(double tol) const {
    const Support s = support();
    const double hi = effective_upper();
    auto g = [this](double x) { return sf(x); };
    return s.lower + integrate(g, s.lower, hi, tol * std::max(1.0, hi)).value;
}

double Distribution::sample(std::mt19937_64& rng) const { return quantile(kernels::uniform_open(rng)); }

bool Distribution::same_law(const Distribution& other) const {
    if (m_ == other.m_) return true;
    if (family() != other.family()) return false;
    if (family() == "empirical") {
        const auto* a = dynamic_cast<const EmpiricalModel*>(m_.get());
        const auto* b = dynamic_cast<const EmpiricalModel*>(other.m_.get());
        return a && b && a->params() == b->params() && this->quantile(0.5) == other.quantile(0.5) &&
               support().upper == other.support().upper;
    }
    if (dynamic_cast<const FunctionModel*>(m_.get()) != nullptr) return false;
    return params() == other.params();
}

std::vector<std::string> builtin_families() {
    return {"uniform", "exponential", "frechet", "power", "weibull", "erlang", "exp-erlang-mix"};
}

Distribution make_parametric(const std::string& family, const std::map<std::string, double>& p) {
    if (family == "uniform") {
        only(p, family, {"b"});
        return Distribution(std::make_shared<Uniform>(positive(need(p, family, "b", 1.0), "uniform b")));
    }
    if (family == "exponential") {
        only(p, family, {"rate"});
        return Distribution(std::make_shared<Exponential>(positive(need(p, family, "rate", 1.0), "exponential rate")));
    }
    if (family == "frechet") {
        only(p, family, {"c", "gamma"});
        return Distribution(std::make_shared<Frechet>(positive(need(p, family, "c", 1.0), "frechet c"),
                                                      positive(need(p, family, "gamma", 1.0), "frechet gamma")));
    }
    if (family == "power") {
        only(p, family, {"a", "b"});
        return Distribution(std::make_shared<Power>(positive(need(p, family, "a"), "power a"),
                                                    positive(need(p, family, "b", 1.0), "power b")));
    }
    if (family == "weibull") {
        only(p, family, {"shape", "scale"});
        return Distribution(std::make_shared<Weibull>(positive(need(p, family, "shape"), "weibull shape"),
                                                      positive(need(p, family, "scale", 1.0), "weibull scale")));
    }
    if (family == "erlang") {
        only(p, family, {"k", "rate"});
        const double k = positive(need(p, family, "k"), "erlang k");
        if (k != std::floor(k) || k > 1000.0) throw DomainError("erlang k must be an integer in [1, 1000]", k);
        return Distribution(
            std::make_shared<Erlang>(static_cast<unsigned>(k), positive(need(p, family, "rate", 1.0), "erlang rate")));
    }
    if (family == "exp-erlang-mix") {
        only(p, family, {"w"});
        const double w = need(p, family, "w");
        if (!(w >= 0.0 && w <= 1.0)) throw DomainError("exp-erlang-mix w must lie in [0,1]", w);
        return Distribution(std::make_shared<ExpErlangMix>(w));
    }
    throw ConfigError("unknown distribution family '" + family + "'");
}

double EmpiricalDistribution::cdf(double x) const {
    if (std::isnan(x)) throw DomainError("empirical cdf at NaN");
    const auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
    return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

double EmpiricalDistribution::quantile(double p) const {
    require_p(p, "quantile");
    const double n = static_cast<double>(samples_.size());
    auto k = static_cast<std::size_t>(std::ceil(n * p - 1e-12 * n));
    k = std::clamp<std::size_t>(k, 1, samples_.size());
    return samples_[k - 1];
}

Distribution EmpiricalDistribution::as_distribution() const {
    return Distribution(std::make_shared<EmpiricalModel>(*this));
}

EmpiricalDistribution from_samples(std::vector<double> samples, std::size_t min_size) {
    if (samples.size() < std::max<std::size_t>(min_size, 1)) {
        throw DomainError("from_samples: size " + std::to_string(samples.size()) + " below the minimum of " +
                          std::to_string(min_size));
    }
    for (double v : samples) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("from_samples: samples must be non-negative", v);
    }
    std::sort(samples.begin(), samples.end());
    return EmpiricalDistribution(std::move(samples));
}

HazardBundle::HazardBundle(Distribution d) : d_(std::move(d)) {}

void HazardBundle::check_domain(double x) const {
    if (std::isnan(x)) throw DomainError("hazard evaluated at NaN");
    if (!(d_.cdf(x) >= kCdfFloor)) {
        std::ostringstream os;
        os << "F(" << x << ") below the floor " << kCdfFloor << "; usable region is x >= " << d_.domain_floor();
        throw DomainError(os.str(), x);
    }
}

double HazardBundle::hazard(double x) const {
    const double s = d_.sf(x);
    if (!(s > 0.0)) throw DomainError("hazard: survival function is zero", x);
    return d_.pdf(x) / s;
}

double HazardBundle::reversed_hazard(double x) const {
    check_domain(x);
    return d_.pdf(x) / d_.cdf(x);
}

double HazardBundle::cum_reversed_hazard(double x) const {
    check_domain(x);
    return -d_.log_cdf(x);
}

HazardBundle hazards(const Distribution& d) {
    if (!d.has_pdf()) throw UnsupportedError(d.family() + ": hazards require a density");
    return HazardBundle(d);
}

double cum_reversed_hazard(const Distribution& d, double x) {
    if (std::isnan(x)) throw DomainError("T evaluated at NaN");
    if (!(d.cdf(x) >= kCdfFloor)) throw DomainError("T: F(x) below the floor", x);
    return -d.log_cdf(x);
}

Grid quantile_grid(const Distribution& d, std::size_t n, double p_lo, double p_hi) {
    const double lo = std::max(d.quantile(p_lo), d.domain_floor());
    const double hi = d.quantile(p_hi);
    if (!(lo > 0.0 && lo < hi)) return Grid::uniform(std::max(lo, 0.0), hi, n);
    return Grid::logarithmic(lo, hi, n);
}

}  // namespace wmit
