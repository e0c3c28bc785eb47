#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "wmit/numerics.hpp"

namespace wmit {

struct Support {
    double lower = 0.0;
    double upper = 0.0;  // may be +infinity
};

using ParamList = std::vector<std::pair<std::string, double>>;

/// A probability law on the non-negative half-line. Families override what they have in
/// closed form; everything else falls back to numerical inversion of the CDF.
class DistributionModel {
  public:
    virtual ~DistributionModel() = default;

    virtual double cdf(double x) const = 0;
    virtual double sf(double x) const { return 1.0 - cdf(x); }
    /// log F(x); the default switches to log1p(-sf) where F is close to one.
    virtual double log_cdf(double x) const;
    virtual bool has_pdf() const { return false; }
    virtual double pdf(double x) const;
    virtual double quantile(double p) const;
    /// Inverse survival: x with sf(x) = q. Accurate for small q.
    virtual double isf(double q) const;
    virtual Support support() const = 0;
    virtual std::string family() const = 0;
    virtual ParamList params() const { return {}; }
    /// Absolute error bound on cdf evaluations (non-zero for discretized laws).
    virtual double cdf_error() const { return 0.0; }
};

/// Immutable, cheaply copyable handle to a DistributionModel.
class Distribution {
  public:
    explicit Distribution(std::shared_ptr<const DistributionModel> model);

    /// Law given by callables (used for derived laws: records, maxima, shock lifetimes, ...).
    static Distribution from_functions(std::string name, std::function<double(double)> cdf, Support support,
                                       std::function<double(double)> pdf = {}, double cdf_error = 0.0);

    double cdf(double x) const { return m_->cdf(x); }
    double sf(double x) const { return m_->sf(x); }
    double log_cdf(double x) const { return m_->log_cdf(x); }
    bool has_pdf() const { return m_->has_pdf(); }
    double pdf(double x) const { return m_->pdf(x); }
    double quantile(double p) const;
    double isf(double q) const;
    Support support() const { return m_->support(); }
    std::string family() const { return m_->family(); }
    ParamList params() const { return m_->params(); }
    double cdf_error() const { return m_->cdf_error(); }

    /// "family(k=v,...)".
    std::string name() const;

    /// Upper support point, or isf(kTailMass) for unbounded support.
    double effective_upper() const;
    /// Smallest x with F(x) >= kCdfFloor (the usable region of tau, T and MIT-type functions).
    double domain_floor() const;

    /// E[X] by integrating the survival function.
    double mean(double tol = kDefaultTol) const;

    /// Draw by inversion.
    double sample(std::mt19937_64& rng) const;

    /// Same family and parameters (or literally the same model).
    bool same_law(const Distribution& other) const;

    const DistributionModel& model() const { return *m_; }

  private:
    std::shared_ptr<const DistributionModel> m_;
};

/// Builds a built-in family: uniform(b), exponential(rate), frechet(c, gamma), power(a, b),
/// weibull(shape, scale), erlang(k, rate), exp-erlang-mix(w).
/// Unknown family or parameter -> ConfigError; invalid value -> DomainError.
Distribution make_parametric(const std::string& family, const std::map<std::string, double>& params);

std::vector<std::string> builtin_families();

/// Step CDF over sorted samples; no density.
class EmpiricalDistribution {
  public:
    const std::vector<double>& sorted_samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    double cdf(double x) const;
    /// Left-continuous inverse: smallest order statistic x_(k) with k/n >= p.
    double quantile(double p) const;
    Distribution as_distribution() const;

  private:
    friend EmpiricalDistribution from_samples(std::vector<double>, std::size_t);
    explicit EmpiricalDistribution(std::vector<double> s) : samples_(std::move(s)) {}
    std::vector<double> samples_;
};

/// Throws DomainError on a negative sample and DomainError ("size") below `min_size`.
EmpiricalDistribution from_samples(std::vector<double> samples, std::size_t min_size = 10);

/// lambda = f/(1-F), tau = f/F, T = -log F. Evaluation below the CDF floor throws DomainError.
class HazardBundle {
  public:
    explicit HazardBundle(Distribution d);

    double hazard(double x) const;
    double reversed_hazard(double x) const;
    double cum_reversed_hazard(double x) const;

    const Distribution& distribution() const { return d_; }

  private:
    void check_domain(double x) const;
    Distribution d_;
};

/// Requires a density; throws UnsupportedError otherwise.
HazardBundle hazards(const Distribution& d);

/// T(x) = -log F(x); needs only the CDF.
double cum_reversed_hazard(const Distribution& d, double x);

/// Log-spaced grid between quantile(p_lo) and quantile(p_hi).
Grid quantile_grid(const Distribution& d, std::size_t n, double p_lo = 1e-4, double p_hi = 1.0 - 1e-4);

}  // namespace wmit
