#pragma once

// Reference computations kept independent of the library: a fixed-level tanh-sinh rule,
// closed forms, and a seeded parameter generator for property tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

// Tanh-sinh on (a, b); endpoint singularities of log/power type are fine.
inline double tanh_sinh(const std::function<double(double)>& f, double a, double b, int level = 7) {
    const double h = std::ldexp(1.0, -level);
    const double r = 0.5 * (b - a);
    double sum = 0.0;
    const double halfpi = 0.5 * std::numbers::pi;
    for (double t = -4.5; t <= 4.5 + 0.5 * h; t += h) {
        const double s = halfpi * std::sinh(t);
        const double ch = std::cosh(s);
        const double w = halfpi * std::cosh(t) / (ch * ch);
        const double u = std::tanh(s);
        // Distance to the nearer endpoint, computed without cancellation.
        const double d = r / (std::exp(std::abs(s)) * ch);
        const double x = u < 0 ? a + d : b - d;
        if (!(x > a && x < b)) continue;
        const double fx = f(x);
        if (std::isfinite(fx)) sum += w * fx;
    }
    return sum * h * r;
}

// Integral over (a, inf) via x = a + u/(1-u).
inline double tanh_sinh_inf(const std::function<double(double)>& f, double a, int level = 8) {
    return tanh_sinh(
        [&](double u) {
            const double v = 1.0 - u;
            return f(a + u / v) / (v * v);
        },
        0.0, 1.0, level);
}

// sup |F_n - F| for a sample against a continuous CDF.
inline double ks_distance(std::vector<double> xs, const std::function<double(double)>& cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double F = cdf(xs[i]);
        d = std::max({d, (i + 1) / n - F, F - i / n});
    }
    return d;
}

// Asymptotic Kolmogorov critical value c(alpha)/sqrt(n).
inline double ks_critical(std::size_t n, double alpha) {
    return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

inline double basel_minus_one() { return std::numbers::pi * std::numbers::pi / 6.0 - 1.0; }

// Seeded generator of parameter draws for property tests.
class Gen {
  public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    std::mt19937_64& engine() { return rng_; }

  private:
    std::mt19937_64 rng_;
};

}  // namespace oracle
