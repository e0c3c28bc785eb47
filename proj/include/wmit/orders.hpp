#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wmit/distribution.hpp"
#include "wmit/kernels.hpp"
#include "wmit/weights.hpp"

namespace wmit {

enum class VerdictKind { holds, fails, inconclusive };

std::string to_string(VerdictKind k);

struct Witness {
    double t = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    std::optional<double> t2;  // second point for pairwise (monotone-ratio) criteria
};

/// Outcome of "X <=_order Y" on a grid.
struct OrderVerdict {
    std::string order;
    std::string x;
    std::string y;
    VerdictKind kind = VerdictKind::inconclusive;
    std::optional<Witness> witness;
    double margin = 0.0;
    std::string grid;
    std::size_t compared = 0;
    std::size_t dropped = 0;  // grid points outside the common domain

    bool holds() const { return kind == VerdictKind::holds; }
    bool fails() const { return kind == VerdictKind::fails; }
    /// Not refuted on the grid: used for antecedents.
    bool satisfied() const { return kind != VerdictKind::fails; }
};

struct OrderOptions {
    double p_lo = 0.01;  // lir p-grid
    double p_hi = 0.99;
    std::size_t p_points = 197;
    double tol = 1e-10;
    kernels::Exec exec = kernels::Exec::parallel;
};

std::vector<std::string> order_kinds();

/// 512 log-spaced points over the union of the central quantile ranges plus 64 seeded random points.
Grid default_order_grid(const Distribution& x, const Distribution& y, std::uint64_t seed = 20240611,
                        double p_lo = 1e-4, double p_hi = 1.0 - 1e-4);

/// Kinds: st, hr, rhr, mit, wmit, smit, disp, lir. `w` is required for wmit and ignored otherwise.
OrderVerdict check_order(const std::string& kind, const Distribution& x, const Distribution& y,
                         const std::optional<WeightFn>& w, const Grid& grid, const OrderOptions& opt = {});

/// Integer law on {0, 1, ..., K}, tail truncated below 1e-12.
class CountLaw {
  public:
    static CountLaw deterministic(unsigned m);
    /// P(N = k) = q (1-q)^(k-1), k >= 1.
    static CountLaw geometric(double q);
    /// Throws ConfigError unless the masses are non-negative and sum to 1 within 1e-10.
    static CountLaw from_pmf(std::vector<double> pmf, std::string name = "pmf");

    double pmf(unsigned k) const { return k < pmf_.size() ? pmf_[k] : 0.0; }
    /// P(N <= k).
    double cdf(unsigned k) const;
    /// P(N >= k).
    double at_least(unsigned k) const;
    unsigned max_k() const { return static_cast<unsigned>(pmf_.size() - 1); }
    const std::string& name() const { return name_; }
    const std::vector<double>& masses() const { return pmf_; }

  private:
    CountLaw(std::vector<double> pmf, std::string name);
    std::vector<double> pmf_;
    std::vector<double> cum_;
    std::string name_;
};

/// rhr: P2(k)/P1(k) increasing; hr: P(N2>=k)/P(N1>=k) increasing. Cross-products over all k-pairs.
OrderVerdict discrete_order_check(const std::string& kind, const CountLaw& n1, const CountLaw& n2);

struct ScalarComparison {
    std::string name;
    double lhs = 0.0;  // claimed <= rhs
    double rhs = 0.0;
    double margin = 0.0;
    bool holds() const { return lhs <= rhs + margin; }
};

struct ImplicationResult {
    std::string theorem;
    std::vector<OrderVerdict> antecedents;
    std::vector<std::string> conditions;  // non-order hypotheses, e.g. "psi convex (declared)"
    bool antecedent_holds = false;
    std::vector<OrderVerdict> order_consequents;
    std::vector<ScalarComparison> scalar_consequents;
    bool violation = false;
};

struct ImplicationReport {
    std::vector<ImplicationResult> results;
    bool any_violation() const {
        for (const auto& r : results) {
            if (r.violation) return true;
        }
        return false;
    }
};

/// rhr => wmit; wmit + convex psi => mit; lir => Var and CE_n (n = 1..3) ordering.
ImplicationReport implication_suite(const Distribution& x, const Distribution& y, const WeightFn& w,
                                    const Grid& grid, const OrderOptions& opt = {});

/// Sets the violation flag: antecedent satisfied and some consequent refuted beyond its margin.
void finalize(ImplicationResult& r);

}  // namespace wmit
