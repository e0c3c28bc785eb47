#include "wmit/spec_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "wmit/errors.hpp"

namespace wmit {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::optional<double> to_number(const std::string& s) {
    const std::string t = trim(s);
    if (t.empty()) return std::nullopt;
    double v = 0.0;
    const auto* end = t.data() + t.size();
    const auto res = std::from_chars(t.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end) return std::nullopt;
    return v;
}

// "k=v,k=v" into a map; `what` names the spec in diagnostics.
std::map<std::string, double> parse_params(const std::string& body, const std::string& what) {
    std::map<std::string, double> out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError(what + ": expected key=value, got '" + item + "'");
        const std::string key = trim(item.substr(0, eq));
        const auto v = to_number(item.substr(eq + 1));
        if (!v) throw ConfigError(what + ": parameter '" + key + "' is not a number");
        if (!out.emplace(key, *v).second) throw ConfigError(what + ": parameter '" + key + "' given twice");
    }
    return out;
}

}  // namespace

DistSpec parse_dist_spec(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw ConfigError("distribution spec is empty");
    DistSpec spec;
    const auto colon = t.find(':');
    const std::string head = trim(t.substr(0, colon));
    const std::string body = colon == std::string::npos ? "" : t.substr(colon + 1);
    if (head == "empirical") {
        if (trim(body).empty()) throw ConfigError("distribution spec 'empirical' needs a file path");
        spec.empirical = trim(body);
        return spec;
    }
    spec.family = head;
    spec.params = parse_params(body, "distribution spec '" + t + "'");
    return spec;
}

Distribution build_distribution(const DistSpec& spec) {
    if (spec.empirical) return from_samples(read_samples_csv(*spec.empirical)).as_distribution();
    return make_parametric(spec.family, spec.params);
}

std::vector<double> read_samples_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open sample file '" + path + "'");
    std::vector<double> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string cell = trim(line.substr(0, line.find(',')));
        if (cell.empty()) continue;
        const auto v = to_number(cell);
        if (!v) {
            if (lineno == 1) continue;  // header
            throw ConfigError(path + ":" + std::to_string(lineno) + ": not a number: '" + cell + "'");
        }
        out.push_back(*v);
    }
    return out;
}

WeightSpec parse_weight_spec(const std::string& text) {
    std::string t = trim(text);
    if (t.empty()) throw ConfigError("weight spec is empty");
    WeightSpec spec;
    const auto at = t.find('@');
    if (at != std::string::npos) {
        spec.ctx = parse_dist_spec(t.substr(at + 1));
        t = trim(t.substr(0, at));
    }
    const auto colon = t.find(':');
    spec.kind = trim(t.substr(0, colon));
    if (colon != std::string::npos) {
        const auto params = parse_params(t.substr(colon + 1), "weight spec '" + text + "'");
        for (const auto& [k, v] : params) {
            if (k != "r" && k != "c") throw ConfigError("weight spec '" + text + "': unknown parameter '" + k + "'");
            spec.r = v;
        }
    }
    return spec;
}

WeightFn build_weight(const WeightSpec& spec, const std::optional<Distribution>& self) {
    if (!weight_needs_ctx(spec.kind)) return make_weight(spec.kind, std::nullopt, spec.r);
    if (spec.ctx) return make_weight(spec.kind, build_distribution(*spec.ctx), spec.r);
    return make_weight(spec.kind, self, spec.r);
}

}  // namespace wmit
