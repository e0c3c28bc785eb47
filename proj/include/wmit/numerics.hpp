#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wmit/function_ref.hpp"

namespace wmit {

using RealFn = FunctionRef<double(double)>;

/// Lower CDF floor: hazard-type quantities are only evaluated where F(x) >= kCdfFloor.
inline constexpr double kCdfFloor = 1e-12;
inline constexpr double kDefaultTol = 1e-8;
/// Tail mass dropped when an infinite support is truncated at quantile(1 - kTailMass).
inline constexpr double kTailMass = 1e-10;

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;  // absolute
    std::size_t evaluations = 0;
};

/// Adaptive Simpson quadrature of f over (a, b).
///
/// The interval is mapped through the smoothstep x = a + (b-a)(3u^2 - 2u^3), so f is never
/// evaluated at the endpoints and integrable endpoint singularities (log x, x^-1/2) converge.
/// An infinite `b` is handled by doubling panels until two consecutive panels fall below tol/4.
/// Throws NumericalError on NaN (carrying the abscissa) or on non-convergence (carrying the
/// best estimate).
QuadResult integrate(RealFn f, double a, double b, double tol = kDefaultTol);

/// inf{x in [lo, hi] : F(x) >= p} by bisection to relative width 1e-12, followed by one
/// Newton step when a density is supplied. Throws DomainError when p is not bracketed.
double invert_cdf(RealFn cdf, double p, double lo, double hi, double tol = 1e-10,
                  std::optional<RealFn> pdf = std::nullopt);

/// Strictly increasing evaluation points (at least 3).
class Grid {
  public:
    static Grid uniform(double lo, double hi, std::size_t n);
    static Grid logarithmic(double lo, double hi, std::size_t n);
    static Grid from_points(std::vector<double> pts);

    /// Union with `count` uniform random points in (lo, hi), seeded; duplicates dropped.
    Grid with_random_points(std::size_t count, std::uint64_t seed) const;

    std::span<const double> points() const { return pts_; }
    std::size_t size() const { return pts_.size(); }
    double lo() const { return pts_.front(); }
    double hi() const { return pts_.back(); }
    double operator[](std::size_t i) const { return pts_[i]; }

    std::string describe() const;

  private:
    explicit Grid(std::vector<double> pts) : pts_(std::move(pts)) {}
    std::vector<double> pts_;
    std::string label_ = "custom";
};

enum class Monotonicity { increasing, decreasing, non_monotone, flat };

std::string to_string(Monotonicity m);

struct MonotoneVerdict {
    Monotonicity kind = Monotonicity::flat;
    /// Present iff kind == non_monotone: consecutive points where the dominant direction breaks.
    std::optional<std::pair<double, double>> witness;
    double band = 0.0;

    bool is_increasing_weakly() const {
        return kind == Monotonicity::increasing || kind == Monotonicity::flat;
    }
    bool is_decreasing_weakly() const {
        return kind == Monotonicity::decreasing || kind == Monotonicity::flat;
    }
};

/// Default band for monotone checks: 1e-7 * (1 + max|f|).
double default_band(std::span<const double> values);

/// Classifies f on the grid. `band < 0` selects default_band.
MonotoneVerdict monotone_on_grid(RealFn f, const Grid& grid, double band = -1.0);

/// Same rule on precomputed values (values[i] = f(grid[i])).
MonotoneVerdict classify_monotone(const Grid& grid, std::span<const double> values, double band = -1.0);

/// k log L - log k!, with 0 log 0 = 0. Throws DomainError for L < 0.
double log_poisson_weight(unsigned k, double L);

/// log k! (exact table for small k, Stirling series beyond).
double log_factorial(unsigned k);

}  // namespace wmit
