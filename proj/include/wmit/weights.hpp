#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "wmit/distribution.hpp"
#include "wmit/numerics.hpp"

namespace wmit {

/// `affine` is both convex and concave (identity, power r = 1).
enum class Convexity { convex, concave, affine, neither, unknown };

std::string to_string(Convexity c);

/// Weight phi >= 0 and cumulative weight psi(x) = integral of phi over [0, x].
class WeightFn {
  public:
    WeightFn(std::string kind, std::function<double(double)> phi, std::function<double(double)> psi,
             Convexity declared, bool psi_finite = true);

    /// Custom weight from phi alone; psi by quadrature, convexity left to certification.
    static WeightFn custom(std::string kind, std::function<double(double)> phi);

    double phi(double x) const { return phi_(x); }
    /// Throws DomainError when psi is infinite for this kind (odds-of, rhr-of).
    double psi(double x) const;
    bool psi_finite() const { return psi_finite_; }
    const std::string& kind() const { return kind_; }
    Convexity declared_convexity() const { return declared_; }

    /// Extra parameters for reports (r, c, ctx name).
    std::vector<std::pair<std::string, std::string>> details;

  private:
    std::string kind_;
    std::function<double(double)> phi_;
    std::function<double(double)> psi_;
    Convexity declared_;
    bool psi_finite_;
};

/// Kinds: identity, power (r), half-square, cdf-of, hazard-of, odds-of, neglog-density, mit-of,
/// rhr-of (c). The *-of kinds need `ctx`; missing ctx -> ConfigError.
WeightFn make_weight(const std::string& kind, std::optional<Distribution> ctx = std::nullopt,
                     std::optional<double> r = std::nullopt);

std::vector<std::string> weight_kinds();
bool weight_needs_ctx(const std::string& kind);

/// (min phi, max phi) over the grid.
std::pair<double, double> check_bounds(const WeightFn& w, const Grid& grid);

struct ConvexityCertificate {
    Convexity kind = Convexity::unknown;
    bool declared = false;  // false: decided by the midpoint test on random pairs
    std::size_t pairs = 0;
};

/// Declared convexity for built-ins, otherwise the midpoint inequality at 512 seeded pairs
/// (log-uniform when lo > 0) plus neighbouring pairs of a 257-point grid over [lo, hi].
ConvexityCertificate certify_convexity(const WeightFn& w, double lo, double hi, std::uint64_t seed = 7);

inline bool is_convex(Convexity c) { return c == Convexity::convex || c == Convexity::affine; }
inline bool is_concave(Convexity c) { return c == Convexity::concave || c == Convexity::affine; }

}  // namespace wmit
