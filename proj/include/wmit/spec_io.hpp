#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wmit/distribution.hpp"
#include "wmit/weights.hpp"

namespace wmit {

/// Either a parametric family with named parameters or an empirical sample file.
struct DistSpec {
    std::string family;  // empty when `empirical` is set
    std::map<std::string, double> params;
    std::optional<std::string> empirical;  // CSV path
};

/// "family:k=v,k=v", "family" alone, or "empirical:path".
DistSpec parse_dist_spec(const std::string& text);
Distribution build_distribution(const DistSpec& spec);
inline Distribution parse_distribution(const std::string& text) { return build_distribution(parse_dist_spec(text)); }

/// One sample per line; a non-numeric first line is taken as a header. Throws ConfigError with the line number.
std::vector<double> read_samples_csv(const std::string& path);

struct WeightSpec {
    std::string kind;
    std::optional<double> r;
    std::optional<DistSpec> ctx;  // absent: the *-of kinds use the measured law
};

/// "kind", "kind:r=2", "kind@family:k=v" (context law after '@').
WeightSpec parse_weight_spec(const std::string& text);
/// `self` supplies the context for *-of kinds when the spec has none.
WeightFn build_weight(const WeightSpec& spec, const std::optional<Distribution>& self = std::nullopt);

}  // namespace wmit
