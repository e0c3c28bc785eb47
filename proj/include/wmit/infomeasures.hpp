#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wmit/distribution.hpp"
#include "wmit/weights.hpp"

namespace wmit {

struct MeasureReport {
    double value = 0.0;
    std::string route;  // quadrature | quantile-domain | monte-carlo | record-identity
    double error_estimate = 0.0;
    std::optional<int> n;
};

inline constexpr int kMaxOrder = 20;

/// -integral F log F.
double cumulative_entropy(const Distribution& d, double tol = 1e-11);
/// Same quantity as E[mit(X)] (nested quadrature; needs a density).
double cumulative_entropy_via_mit(const Distribution& d, double tol = 1e-11);

/// integral F T^n / n!, n in 1..20.
double gce(const Distribution& d, int n, double tol = 1e-11);
/// integral phi F T^n / n!, n in 1..20.
double wgce(const Distribution& d, const WeightFn& w, int n, double tol = 1e-11);

/// -integral x F log F.
double weighted_cumulative_entropy(const Distribution& d, double tol = 1e-11);

struct VariancePair {
    double direct = 0.0;    // E[psi^2] - E[psi]^2
    double via_wmit = 0.0;  // E[wmit^2(X)]
};

VariancePair variance_of_weighted(const Distribution& d, const WeightFn& w, double tol = 1e-11);

double differential_entropy(const Distribution& d, double tol = 1e-11);
double past_entropy(const Distribution& d, double t, double tol = 1e-11);
double residual_entropy(const Distribution& d, double t, double tol = 1e-11);

struct VarentropyRoutes {
    double direct = 0.0;        // Var(-log f(X))
    double via_residual = 0.0;  // E[(H(X) + log lambda(X))^2]
    double via_past = 0.0;      // E[(Hbar(X) + log tau(X))^2]
};

VarentropyRoutes varentropy(const Distribution& d, double tol = 1e-10);

struct MonteCarloEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t draws = 0;
};

/// Sample variance of -log f(X) over `draws` inversion draws.
MonteCarloEstimate varentropy_monte_carlo(const Distribution& d, std::size_t draws, std::uint64_t seed);

struct VarentropyBoundReport {
    double V = 0.0;
    bool cond_residual = false;  // log f(x)/f(t) <= 1 for x >= t
    double worst_residual = 0.0;
    MonotoneVerdict residual_entropy;  // must be weakly decreasing for part (i)
    bool cond_past = false;            // log f(x)/f(t) <= 1 for x <= t
    double worst_past = 0.0;
    MonotoneVerdict past_entropy;  // must be weakly increasing for part (ii)
    bool part_i = false;
    bool part_ii = false;
    bool bound_holds = false;  // V <= 1 + margin
    bool violation = false;    // a part applies but V > 1 beyond margin
};

VarentropyBoundReport varentropy_bound_check(const Distribution& d, std::size_t grid_points = 96);

struct RecurrenceResiduals {
    double target = 0.0;      // wgce(n)
    double previous = 0.0;    // wgce(n-1)
    double route_i = 0.0;     // previous - E[h(X)]/(n-1)!
    double route_ii = 0.0;    // previous * (1 - E[m'(Z)])
    double residual_i = 0.0;
    double residual_ii = 0.0;
};

/// Needs n >= 2 and a density.
RecurrenceResiduals gce_recurrence_check(const Distribution& d, const WeightFn& w, int n);

/// C_n = exp(integral_0^1 log(u (-log u)^n) du), by quadrature.
double lower_bound_constant(int n);

struct BoundCheck {
    std::string name;
    bool applicable = false;
    std::string reason;  // why not applicable
    double lhs = 0.0;    // the side claimed smaller
    double rhs = 0.0;
    double margin = 0.0;  // numerical slack
    bool holds() const { return !applicable || lhs <= rhs + margin; }
};

struct BoundReport {
    std::vector<BoundCheck> checks;
    bool all_hold() const {
        for (const auto& c : checks) {
            if (!c.holds()) return false;
        }
        return true;
    }
};

/// Upper and lower WGCE bounds, sigma[psi(X)] >= psi(CE), the sigma ratio sandwich and the
/// WGCE/GCE sandwich, with hypotheses certified on a grid.
BoundReport bound_suite(const Distribution& d, const WeightFn& w, int n);

}  // namespace wmit
