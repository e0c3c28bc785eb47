#pragma once

// Internal: integrals over the (truncated) support of a distribution.

#include <cmath>
#include <sstream>
#include <string>

#include "wmit/distribution.hpp"
#include "wmit/errors.hpp"
#include "wmit/numerics.hpp"

namespace wmit::detail {

/// integral of g over [lo, upper end]. For unbounded support the pieces at survival mass
/// 1e-6..1e-8 and 1e-8..1e-10 are compared first; a tail that does not decay raises
/// NumericalError naming `what`.
inline QuadResult integrate_support(const Distribution& d, RealFn g, double lo, double atol, const std::string& what) {
    const Support s = d.support();
    lo = std::max(lo, s.lower);
    if (std::isfinite(s.upper)) {
        if (lo >= s.upper) return {0.0, 0.0, 1};
        return integrate(g, lo, s.upper, atol);
    }
    const double u_prev = d.isf(1e-6);
    const double u_mid = d.isf(1e-8);
    const double u_end = d.isf(kTailMass);
    if (lo >= u_mid) return integrate(g, lo, INFINITY, atol);
    auto main = integrate(g, lo, u_mid, atol);
    const auto tail = integrate(g, u_mid, u_end, atol);
    if (lo < u_prev) {
        const double prev = integrate(g, u_prev, u_mid, atol).value;
        if (std::abs(tail.value) > 1e-6 * (1.0 + std::abs(main.value)) && std::abs(tail.value) > 0.5 * std::abs(prev)) {
            std::ostringstream os;
            os << what << ": integral over the support appears infinite for " << d.name() << " (tail piece "
               << tail.value << " does not decay)";
            throw NumericalError(os.str(), main.value + tail.value, u_end);
        }
    }
    // Polynomial tails still carry mass past the truncation point.
    const auto far = integrate(g, u_end, INFINITY, atol);
    main.value += tail.value + far.value;
    main.error_estimate += tail.error_estimate + far.error_estimate;
    main.evaluations += tail.evaluations + far.evaluations;
    return main;
}

inline double scale_of(const Distribution& d) { return std::max(1.0, d.effective_upper()); }

}  // namespace wmit::detail
