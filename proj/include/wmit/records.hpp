#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "wmit/distribution.hpp"
#include "wmit/kernels.hpp"
#include "wmit/weights.hpp"

namespace wmit {

inline constexpr int kMaxRecordIndex = 20;

/// Law of the lower record X_{n+1}: cdf F * sum_{k<=n} T^k/k!, pdf f T^n/n!.
/// `n` is the model index, so n = 0 is the base law itself.
struct RecordModel {
    Distribution base;
    int n = 0;
};

/// Throws DomainError when n is outside [0, 20].
double record_cdf(const RecordModel& m, double x);
double record_sf(const RecordModel& m, double x);
double record_pdf(const RecordModel& m, double x);
Distribution record_distribution(const RecordModel& m);

/// `count` exact draws of X_{n+1} (model index n) by inverting the record cdf.
std::vector<double> sample_records(const Distribution& base, int n, std::size_t count, std::uint64_t seed,
                                   kernels::Exec exec = kernels::Exec::parallel);

/// Monte Carlo estimate against a deterministic target.
struct IdentityCheck {
    double estimate = 0.0;
    double target = 0.0;
    double std_error = 0.0;
    double residual = 0.0;  // (estimate - target) / std_error
    std::size_t draws = 0;
    std::size_t excluded = 0;  // draws below the CDF floor
    bool within(double k) const { return std::abs(residual) <= k; }
};

/// E[wmit(X_n)] against wgce(n). `n` is the record subscript (n >= 1, X_1 is the base draw).
IdentityCheck rit_identity_check(const Distribution& base, const WeightFn& w, int n, std::size_t count,
                                 std::uint64_t seed);

struct CovIdentityChecks {
    IdentityCheck tau_form;  // (1/n) E[phi T / tau](X_n) = wgce(n)
    IdentityCheck cov_form;  // (1/n) Cov[psi(X_n), T(X_n)] = -wgce(n)
};

/// Needs a density. Same subscript convention as rit_identity_check.
CovIdentityChecks cov_identity_check(const Distribution& base, const WeightFn& w, int n, std::size_t count,
                                     std::uint64_t seed);

/// E[psi(X_n)] - E[psi(X_{n+1})] against wgce(n), from two independent record samples.
IdentityCheck spacing_identity_check(const Distribution& base, const WeightFn& w, int n, std::size_t count,
                                     std::uint64_t seed);

}  // namespace wmit
