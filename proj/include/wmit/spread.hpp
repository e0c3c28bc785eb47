#pragma once

#include "wmit/distribution.hpp"
#include "wmit/weights.hpp"

namespace wmit {

/// integral_0^{F^-1(p)} F; checked against p * mit(F^-1(p)).
double left_spread(const Distribution& d, double p, double tol = 1e-12);

/// integral_{F^-1(p)}^inf sf (excess wealth).
double right_spread(const Distribution& d, double p, double tol = 1e-12);

/// integral_0^{F^-1(p)} phi F; checked against p * wmit(F^-1(p)).
double transformed_left_spread(const Distribution& d, const WeightFn& w, double p, double tol = 1e-12);

/// integral_0^1 wmit(F^-1(p))^2 dp.
double quantile_variance(const Distribution& d, const WeightFn& w, double tol = 1e-11);

/// (1/(n-1)!) integral_0^1 wmit(F^-1(p)) (-log p)^{n-1} dp.
double quantile_gce(const Distribution& d, const WeightFn& w, int n, double tol = 1e-11);

/// Quantile under its risk-management name.
inline double value_at_risk(const Distribution& d, double p) { return d.quantile(p); }

}  // namespace wmit
