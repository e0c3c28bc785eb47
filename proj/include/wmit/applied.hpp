#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "wmit/distribution.hpp"
#include "wmit/kernels.hpp"
#include "wmit/numerics.hpp"
#include "wmit/orders.hpp"
#include "wmit/weights.hpp"

namespace wmit {

/// Law of the i-th smallest of n i.i.d. draws from `base` (maximum: i = n).
Distribution order_statistic_law(const Distribution& base, unsigned i, unsigned n);

/// Shocks from a Poisson process with cumulative intensity Lambda; the lifetime is the
/// epoch of shock N, where N = `survived` has P(N = 0) = 0.
struct ShockModel {
    Distribution interarrival;
    CountLaw survived;
    /// Defaults to -log sf of the interarrival law. A custom Lambda must satisfy Lambda(0) = 0.
    std::function<double(double)> cum_intensity;
    bool custom_intensity = false;
};

/// Throws ConfigError when P(N = 0) > 0 or Lambda(0) != 0.
ShockModel make_shock_model(const Distribution& interarrival, const CountLaw& survived,
                            std::function<double(double)> cum_intensity = {});

/// sum_k P(N <= k) e^-Lambda Lambda^k / k!.
double shock_lifetime_cdf(const ShockModel& m, double t);
double shock_lifetime_sf(const ShockModel& m, double t);
Distribution shock_lifetime(const ShockModel& m);

/// Direct simulation: Lambda(T) is a sum of N unit exponentials, inverted through the interarrival law.
std::vector<double> simulate_shock_lifetimes(const ShockModel& m, std::size_t count, std::uint64_t seed,
                                             kernels::Exec exec = kernels::Exec::parallel);

/// N1 <=rhr N2 (antecedent) against T1 <=wmit T2. Throws ConfigError for different interarrival laws.
ImplicationResult shock_order_check(const ShockModel& m1, const ShockModel& m2, const WeightFn& w, const Grid& grid,
                                    const OrderOptions& opt = {});

struct PoissonPrecondition {
    MonotoneVerdict verdict;
    std::vector<unsigned> skipped;  // j where both partial sums vanish
};

/// Monotonicity in j in {r..jmax} of sum_{k<=j-r} C(r+k-1, k) P2(k) over the same sum for P1,
/// where Pi(k) = P(Ni <= k).
PoissonPrecondition poisson_shock_precondition(const CountLaw& n1, const CountLaw& n2, unsigned r, unsigned jmax);

/// Maximum of N i.i.d. components; N >= 1.
struct RandomMaxima {
    Distribution component;
    CountLaw size;
};

/// sum_k P(N = k) F^k.
double random_maxima_cdf(const RandomMaxima& m, double t);
Distribution random_maxima(const RandomMaxima& m);

/// N1 <=hr N2 against max1 <=wmit max2. phi must be increasing on the grid (PreconditionViolation otherwise).
ImplicationResult random_maxima_order_check(const RandomMaxima& m1, const RandomMaxima& m2, const WeightFn& w,
                                            const Grid& grid, const OrderOptions& opt = {});

struct RenewalModel {
    Distribution interarrival;
    double horizon = 0.0;
    double mesh = 0.0;  // 0: mean / 200
};

/// Renewal function on a uniform mesh, with a second solve at half the mesh for an error estimate.
class RenewalSolution {
  public:
    /// Throws DomainError for horizon <= 0 or mesh < 0, NumericalError when the interarrival mean is infinite.
    explicit RenewalSolution(const RenewalModel& model, kernels::Exec exec = kernels::Exec::parallel);

    /// M(t) from the fine mesh. Throws DomainError beyond the horizon.
    double renewal_function(double t) const;
    /// |M_h(t) - M_{h/2}(t)|.
    double error_estimate(double t) const;
    /// F(t+x) + integral_0^t F(t-u+x) dM(u) - M(t).
    double excess_cdf(double t, double x) const;
    /// Law of the excess lifetime at time t; cdf_error carries the mesh error.
    Distribution excess_law(double t) const;

    double mean() const { return mean_; }
    double mesh() const { return h_; }
    const RenewalModel& model() const { return model_; }

  private:
    RenewalModel model_;
    double mean_ = 0.0;
    double h_ = 0.0;
    std::vector<double> coarse_;  // M on the mesh h
    std::vector<double> fine_;    // M on the mesh h/2
};

/// Trapezoidal (Stieltjes midpoint) scheme for M = F + F * dM on nodes 0, h, ..., up to `horizon`.
/// Serial and parallel versions give identical results.
std::vector<double> solve_renewal(const Distribution& interarrival, double h, double horizon,
                                  kernels::Exec exec = kernels::Exec::parallel);

/// Convenience wrapper: M(t) on a fresh solution with horizon t.
double renewal_function(const RenewalModel& m, double t);
double excess_lifetime_cdf(const RenewalModel& m, double t, double x);

/// Residual life law X_s = (X - s | X > s).
Distribution residual_law(const Distribution& d, double s);

/// Hypotheses (IWMIT; NBU and X_s <=wmit X at 16 sampled s) against gamma(t) <=wmit gamma(0).
ImplicationResult excess_wmit_order_check(const RenewalSolution& sol, const WeightFn& w, double t, const Grid& grid,
                                          const OrderOptions& opt = {});

}  // namespace wmit
