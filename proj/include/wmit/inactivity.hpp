#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "wmit/distribution.hpp"
#include "wmit/kernels.hpp"
#include "wmit/numerics.hpp"
#include "wmit/weights.hpp"

namespace wmit {

/// Mean inactivity time (1/F(t)) * integral_0^t F. Throws DomainError below the CDF floor.
double mit(const Distribution& d, double t, double tol = kDefaultTol);

/// Weighted MIT (1/F(t)) * integral_0^t phi F.
double wmit(const Distribution& d, const WeightFn& w, double t, double tol = kDefaultTol);

/// wmit at every grid point: panel integrals in parallel, prefix sum serial.
std::vector<double> wmit_curve(const Distribution& d, const WeightFn& w, const Grid& grid, double tol = kDefaultTol,
                               kernels::Exec exec = kernels::Exec::parallel);

/// Weighted mean residual life (1/sf(t)) * integral_t^inf phi sf.
/// Throws NumericalError when E[psi(X)] looks infinite (tail keeps contributing).
double wmrl(const Distribution& d, const WeightFn& w, double t, double tol = kDefaultTol);

/// E[psi(X) | X <= t]; checked against psi(t) - wmit(t).
double weighted_past_mean(const Distribution& d, const WeightFn& w, double t, double tol = kDefaultTol);

/// Derivative identity check: max over the grid of |central difference of wmit - (phi - tau wmit)|.
double wmit_derivative_check(const Distribution& d, const WeightFn& w, const Grid& grid);

/// d/dt wmit via phi - tau * wmit (needs a density).
double wmit_derivative(const Distribution& d, const WeightFn& w, double t, double tol = kDefaultTol);

/// exp(-integral_t^upper (phi - m') / m), with m the WMIT curve.
double reconstruct_cdf(const std::function<double(double)>& wmit_fn, const std::function<double(double)>& wmit_deriv,
                       const WeightFn& w, double t, double upper, double tol = 1e-10);

struct IwmitReport {
    MonotoneVerdict direct;
    MonotoneVerdict cond_i;    // phi / tau
    MonotoneVerdict cond_ii_phi;
    MonotoneVerdict cond_ii_imit;
    std::optional<MonotoneVerdict> cond_iii;  // psi tau / phi; absent when psi is infinite
    std::optional<MonotoneVerdict> drhr;      // tau, with the convexity of psi
    std::optional<Convexity> psi_convexity;
    std::optional<MonotoneVerdict> x_tau;     // power weights only

    bool cond_i_holds() const { return cond_i.is_increasing_weakly(); }
    bool cond_ii_holds() const { return cond_ii_phi.is_increasing_weakly() && cond_ii_imit.is_increasing_weakly(); }
    bool cond_iii_holds() const { return cond_iii && cond_iii->is_decreasing_weakly(); }
    bool drhr_holds() const { return drhr && drhr->is_decreasing_weakly() && psi_convexity && is_convex(*psi_convexity); }
    bool x_tau_holds() const { return x_tau && x_tau->is_decreasing_weakly(); }
    bool any_sufficient() const {
        return cond_i_holds() || cond_ii_holds() || cond_iii_holds() || drhr_holds() || x_tau_holds();
    }
    /// A sufficient condition holds but the curve is decreasing: a theorem violation.
    bool contradiction() const { return any_sufficient() && direct.kind == Monotonicity::decreasing; }
};

IwmitReport iwmit_classify(const Distribution& d, const WeightFn& w, const Grid& grid);

/// (1/F(t)) * integral_0^t f mit, computed by parts as
/// (log F(t) * integral_0^t F - integral_0^t F log F) / F(t).
double dynamic_cumulative_entropy(const Distribution& d, double t, double tol = kDefaultTol);

struct AucResult {
    double auc = 0.0;
    /// |wmrl route - limit route|, |wmrl route - direct|, |limit route - direct|.
    std::array<double, 3> residuals{};
};

/// AUC = E[G(X)], G the CDF of y, three ways.
AucResult auc(const Distribution& x, const Distribution& y, double tol = 1e-10);

/// (1/F(t)) * integral_0^t sf.
double age_replacement_mttf(const Distribution& d, double t, double tol = kDefaultTol);

}  // namespace wmit
