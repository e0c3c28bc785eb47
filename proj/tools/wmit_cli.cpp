// wmit: command-line front end. See README.md for the commands and report format.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wmit/acceptance.hpp"
#include "wmit/applied.hpp"
#include "wmit/errors.hpp"
#include "wmit/inactivity.hpp"
#include "wmit/infomeasures.hpp"
#include "wmit/orders.hpp"
#include "wmit/records.hpp"
#include "wmit/spec_io.hpp"
#include "wmit/spread.hpp"

using json = nlohmann::json;
using namespace wmit;

namespace {

enum Exit { kOk = 0, kFailed = 1, kValidation = 2, kNumerical = 3, kViolation = 4 };

struct RunConfig {
    std::string command;
    std::vector<std::string> dists;
    std::optional<std::string> weight;
    std::optional<std::string> kind;
    std::optional<std::string> quantity;
    std::optional<std::string> model;
    std::vector<std::string> counts;
    std::optional<int> n;
    std::optional<double> t;
    std::optional<double> x;
    std::optional<double> p;
    std::optional<double> horizon;
    std::size_t grid_points = 512;
    bool suite = false;
    double tol = 1e-10;
    std::optional<std::uint64_t> seed;
    std::size_t samples = 100000;
    std::vector<int> only;
    std::string output;
    std::string format = "json";
};

json config_json(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["dist"] = c.dists;
    if (c.weight) j["weight"] = *c.weight;
    if (c.kind) j["kind"] = *c.kind;
    if (c.quantity) j["quantity"] = *c.quantity;
    if (c.model) j["model"] = *c.model;
    if (!c.counts.empty()) j["count"] = c.counts;
    if (c.n) j["n"] = *c.n;
    if (c.t) j["t"] = *c.t;
    if (c.x) j["x"] = *c.x;
    if (c.p) j["p"] = *c.p;
    if (c.horizon) j["horizon"] = *c.horizon;
    j["grid_points"] = c.grid_points;
    j["suite"] = c.suite;
    j["tol"] = c.tol;
    j["samples"] = c.samples;
    if (!c.only.empty()) j["only"] = c.only;
    return j;
}

// FNV-1a of the canonical config text: the seed when none is given.
std::uint64_t derive_seed(const RunConfig& c) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : config_json(c).dump()) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

RunConfig from_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
    RunConfig c;
    auto field = [&](const char* name) -> const json* {
        const auto it = j.find(name);
        return it == j.end() ? nullptr : &*it;
    };
    try {
        if (!field("command")) throw ConfigError("config: field 'command' is required");
        c.command = j.at("command").get<std::string>();
        if (auto* d = field("dist")) {
            // A spec string, a {family, params} tree, an {empirical: path} tree, or a list of these.
            auto one = [](const json& e) -> std::string {
                if (e.is_string()) return e.get<std::string>();
                if (e.contains("empirical")) return "empirical:" + e.at("empirical").get<std::string>();
                std::string s = e.at("family").get<std::string>();
                if (e.contains("params")) {
                    char sep = ':';
                    for (const auto& [k, v] : e.at("params").items()) {
                        std::ostringstream os;
                        os.precision(17);
                        os << sep << k << "=" << v.get<double>();
                        s += os.str();
                        sep = ',';
                    }
                }
                return s;
            };
            if (d->is_array()) {
                for (const auto& e : *d) c.dists.push_back(one(e));
            } else {
                c.dists.push_back(one(*d));
            }
        }
        if (auto* w = field("weight")) {
            if (w->is_string()) {
                c.weight = w->get<std::string>();
            } else {
                std::string s = w->at("kind").get<std::string>();
                if (w->contains("r")) s += ":r=" + json(w->at("r").get<double>()).dump();
                if (w->contains("ctx")) s += "@" + w->at("ctx").get<std::string>();
                c.weight = s;
            }
        }
        if (auto* v = field("kind")) c.kind = v->get<std::string>();
        if (auto* v = field("quantity")) c.quantity = v->get<std::string>();
        if (auto* v = field("model")) c.model = v->get<std::string>();
        if (auto* v = field("count")) c.counts = v->is_array() ? v->get<std::vector<std::string>>()
                                                              : std::vector<std::string>{v->get<std::string>()};
        if (auto* v = field("n")) c.n = v->get<int>();
        if (auto* v = field("t")) c.t = v->get<double>();
        if (auto* v = field("x")) c.x = v->get<double>();
        if (auto* v = field("p")) c.p = v->get<double>();
        if (auto* v = field("horizon")) c.horizon = v->get<double>();
        if (auto* v = field("grid_points")) c.grid_points = v->get<std::size_t>();
        if (auto* v = field("suite")) c.suite = v->get<bool>();
        if (auto* v = field("tol")) c.tol = v->get<double>();
        if (auto* v = field("seed")) c.seed = v->get<std::uint64_t>();
        if (auto* v = field("samples")) c.samples = v->get<std::size_t>();
        if (auto* v = field("only")) c.only = v->get<std::vector<int>>();
        if (auto* v = field("output")) c.output = v->get<std::string>();
        if (auto* v = field("format")) c.format = v->get<std::string>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return c;
}

void validate(const RunConfig& c) {
    if (!(c.tol > 0.0)) throw ConfigError("field 'tol' must be positive");
    if (c.samples < 1) throw ConfigError("field 'samples' must be at least 1");
    if (c.format != "json" && c.format != "csv") throw ConfigError("field 'format' must be json or csv");
    if (c.grid_points < 3) throw ConfigError("field 'grid_points' must be at least 3");
}

const std::string& need_dist(const RunConfig& c, std::size_t i, const char* role) {
    if (c.dists.size() <= i) throw ConfigError(std::string("field 'dist': missing the ") + role + " law");
    return c.dists[i];
}

double need(const std::optional<double>& v, const char* field) {
    if (!v) throw ConfigError(std::string("field '") + field + "' is required here");
    return *v;
}

CountLaw parse_count_law(const std::string& text) {
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string body = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (head == "pmf") {
        std::vector<double> pmf;
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ';')) pmf.push_back(std::stod(item));
        return CountLaw::from_pmf(pmf, "pmf");
    }
    const auto spec = parse_dist_spec(text);  // reuse the k=v parser
    auto get = [&](const char* k) {
        const auto it = spec.params.find(k);
        if (it == spec.params.end()) throw ConfigError("count law '" + text + "': parameter '" + k + "' missing");
        return it->second;
    };
    if (head == "geometric") return CountLaw::geometric(get("q"));
    if (head == "deterministic") return CountLaw::deterministic(static_cast<unsigned>(get("m")));
    throw ConfigError("field 'count': unknown count law '" + head + "' (geometric, deterministic, pmf)");
}

struct Report {
    json j;
    json results = json::array();
    bool violation = false;

    void add(const std::string& name, double value, const std::string& route, double err = 0.0) {
        json r;
        r["name"] = name;
        r["value"] = std::isfinite(value) ? json(value) : json(nullptr);
        r["route"] = route;
        r["error_estimate"] = err;
        results.push_back(r);
    }
};

json verdict_json(const OrderVerdict& v) {
    json j;
    j["order"] = v.order;
    j["x"] = v.x;
    j["y"] = v.y;
    j["verdict"] = to_string(v.kind);
    j["margin"] = v.margin;
    j["grid"] = v.grid;
    j["compared"] = v.compared;
    j["dropped"] = v.dropped;
    if (v.witness) {
        j["witness"] = {{"t", v.witness->t}, {"lhs", v.witness->lhs}, {"rhs", v.witness->rhs}};
        if (v.witness->t2) j["witness"]["t2"] = *v.witness->t2;
    }
    return j;
}

json implication_json(const ImplicationResult& r) {
    json j;
    j["theorem"] = r.theorem;
    j["antecedent_holds"] = r.antecedent_holds;
    j["violation"] = r.violation;
    j["conditions"] = r.conditions;
    for (const auto& a : r.antecedents) j["antecedents"].push_back(verdict_json(a));
    for (const auto& c : r.order_consequents) j["consequents"].push_back(verdict_json(c));
    for (const auto& s : r.scalar_consequents) {
        j["consequents"].push_back({{"name", s.name}, {"lhs", s.lhs}, {"rhs", s.rhs}, {"margin", s.margin},
                                    {"holds", s.holds()}});
    }
    return j;
}

json monotone_json(const MonotoneVerdict& v) {
    json j{{"kind", to_string(v.kind)}, {"band", v.band}};
    if (v.witness) j["witness"] = {v.witness->first, v.witness->second};
    return j;
}

// Quadrature routes report |v(tol) - v(100 tol)| as their error estimate.
void add_two_tol(Report& rep, const std::string& name, const std::string& route, double tol,
                 const std::function<double(double)>& f) {
    const double v = f(tol);
    rep.add(name, v, route, std::abs(v - f(100.0 * tol)));
}

void run_measure(const RunConfig& c, Report& rep) {
    const auto d = parse_distribution(need_dist(c, 0, "measured"));
    const std::string q = c.quantity.value_or("");
    if (q.empty()) throw ConfigError("field 'quantity' is required for measure");
    std::optional<WeightFn> w;
    if (c.weight) w = build_weight(parse_weight_spec(*c.weight), d);
    const WeightFn wt = w ? *w : make_weight("identity");
    const int n = c.n.value_or(1);
    rep.j["distribution"] = d.name();
    rep.j["weight"] = wt.kind();
    auto quad = [&](const std::string& name, const std::function<double(double)>& f) {
        add_two_tol(rep, name, "quadrature", c.tol, f);
    };
    auto quantile_route = [&](const std::string& name, const std::function<double(double)>& f) {
        add_two_tol(rep, name, "quantile-domain", c.tol, f);
    };
    if (q == "mit") return quad(q, [&](double tol) { return mit(d, need(c.t, "t"), tol); });
    if (q == "wmit") return quad(q, [&](double tol) { return wmit::wmit(d, wt, need(c.t, "t"), tol); });
    if (q == "wmrl") return quad(q, [&](double tol) { return wmrl(d, wt, need(c.t, "t"), tol); });
    if (q == "weighted-past-mean")
        return quad(q, [&](double tol) { return weighted_past_mean(d, wt, need(c.t, "t"), tol); });
    if (q == "mean") return quad(q, [&](double tol) { return d.mean(tol); });
    if (q == "cumulative-entropy") {
        quad(q, [&](double tol) { return cumulative_entropy(d, tol); });
        if (d.has_pdf()) quad(q + " (E[mit])", [&](double tol) { return cumulative_entropy_via_mit(d, tol); });
        return;
    }
    if (q == "gce") {
        quad(q, [&](double tol) { return gce(d, n, tol); });
        quantile_route(q + " (quantile)", [&](double tol) { return quantile_gce(d, make_weight("identity"), n, tol); });
        return;
    }
    if (q == "wgce") {
        quad(q, [&](double tol) { return wgce(d, wt, n, tol); });
        quantile_route(q + " (quantile)", [&](double tol) { return quantile_gce(d, wt, n, tol); });
        return;
    }
    if (q == "weighted-cumulative-entropy") return quad(q, [&](double tol) { return weighted_cumulative_entropy(d, tol); });
    if (q == "dynamic-cumulative-entropy")
        return quad(q, [&](double tol) { return dynamic_cumulative_entropy(d, need(c.t, "t"), tol); });
    if (q == "variance") {
        const auto v = variance_of_weighted(d, wt, c.tol);
        const auto coarse = variance_of_weighted(d, wt, 100.0 * c.tol);
        rep.add(q, v.direct, "quadrature", std::abs(v.direct - coarse.direct));
        rep.add(q + " (E[wmit^2])", v.via_wmit, "quadrature",
                std::max(std::abs(v.via_wmit - coarse.via_wmit), std::abs(v.direct - v.via_wmit)));
        quantile_route(q + " (quantile)", [&](double tol) { return quantile_variance(d, wt, tol); });
        return;
    }
    if (q == "differential-entropy") return quad(q, [&](double tol) { return differential_entropy(d, tol); });
    if (q == "past-entropy") return quad(q, [&](double tol) { return past_entropy(d, need(c.t, "t"), tol); });
    if (q == "residual-entropy") return quad(q, [&](double tol) { return residual_entropy(d, need(c.t, "t"), tol); });
    if (q == "varentropy") {
        const auto v = varentropy(d, c.tol);
        const auto coarse = varentropy(d, 100.0 * c.tol);
        rep.add(q, v.direct, "quadrature", std::abs(v.direct - coarse.direct));
        rep.add(q + " (residual)", v.via_residual, "quadrature", std::abs(v.via_residual - coarse.via_residual));
        rep.add(q + " (past)", v.via_past, "quadrature", std::abs(v.via_past - coarse.via_past));
        const auto mc = varentropy_monte_carlo(d, c.samples, rep.j["seed"].get<std::uint64_t>());
        rep.add(q + " (monte carlo)", mc.value, "monte-carlo", mc.std_error);
        return;
    }
    if (q == "left-spread") return quantile_route(q, [&](double tol) { return left_spread(d, need(c.p, "p"), tol); });
    if (q == "right-spread") return quantile_route(q, [&](double tol) { return right_spread(d, need(c.p, "p"), tol); });
    if (q == "transformed-left-spread")
        return quantile_route(q, [&](double tol) { return transformed_left_spread(d, wt, need(c.p, "p"), tol); });
    if (q == "value-at-risk") return rep.add(q, value_at_risk(d, need(c.p, "p")), "quantile-domain");
    if (q == "auc") {
        const auto y = parse_distribution(need_dist(c, 1, "second"));
        const auto a = auc(d, y);
        rep.add(q, a.auc, "quadrature", std::max({a.residuals[0], a.residuals[1], a.residuals[2]}));
        return;
    }
    throw ConfigError("field 'quantity': unknown quantity '" + q + "'");
}

void run_order_check(const RunConfig& c, Report& rep) {
    const auto x = parse_distribution(need_dist(c, 0, "first"));
    const auto y = parse_distribution(need_dist(c, 1, "second"));
    std::optional<WeightFn> w;
    if (c.weight) w = build_weight(parse_weight_spec(*c.weight), x);
    const auto grid = default_order_grid(x, y, rep.j["seed"].get<std::uint64_t>());
    OrderOptions opt;
    opt.tol = c.tol;
    if (c.suite) {
        const auto r = implication_suite(x, y, w ? *w : make_weight("identity"), grid, opt);
        for (const auto& res : r.results) rep.j["implications"].push_back(implication_json(res));
        rep.violation = r.any_violation();
        return;
    }
    const std::string kind = c.kind.value_or("");
    if (kind.empty()) throw ConfigError("field 'kind' is required for order-check");
    const auto v = check_order(kind, x, y, w, grid, opt);
    rep.j["verdict"] = verdict_json(v);
    rep.add(kind + " margin", v.margin, "quadrature");
}

void run_iwmit(const RunConfig& c, Report& rep) {
    const auto d = parse_distribution(need_dist(c, 0, "classified"));
    const WeightFn w = c.weight ? build_weight(parse_weight_spec(*c.weight), d) : make_weight("identity");
    const auto grid = quantile_grid(d, c.grid_points);
    const auto r = iwmit_classify(d, w, grid);
    json j;
    j["direct"] = monotone_json(r.direct);
    j["cond_i"] = monotone_json(r.cond_i);
    j["cond_ii_phi"] = monotone_json(r.cond_ii_phi);
    j["cond_ii_imit"] = monotone_json(r.cond_ii_imit);
    if (r.cond_iii) j["cond_iii"] = monotone_json(*r.cond_iii);
    if (r.drhr) j["drhr"] = monotone_json(*r.drhr);
    if (r.psi_convexity) j["psi_convexity"] = to_string(*r.psi_convexity);
    if (r.x_tau) j["x_tau"] = monotone_json(*r.x_tau);
    j["any_sufficient"] = r.any_sufficient();
    j["contradiction"] = r.contradiction();
    rep.j["iwmit"] = j;
    rep.j["grid"] = grid.describe();
    rep.violation = r.contradiction();
}

void run_reconstruct(const RunConfig& c, Report& rep) {
    const auto d = parse_distribution(need_dist(c, 0, "reconstructed"));
    const WeightFn w = c.weight ? build_weight(parse_weight_spec(*c.weight), d) : make_weight("identity");
    const auto grid = quantile_grid(d, std::min<std::size_t>(c.grid_points, 64), 0.01, 0.99);
    const double upper = d.quantile(0.999);
    auto m = [&](double t) { return wmit::wmit(d, w, t, c.tol); };
    auto dm = [&](double t) { return wmit_derivative(d, w, t, c.tol); };
    double worst = 0.0;
    for (double t : grid.points()) worst = std::max(worst, std::abs(reconstruct_cdf(m, dm, w, t, upper) - d.cdf(t) / d.cdf(upper)));
    rep.j["grid"] = grid.describe();
    rep.add("max |F_reconstructed - F|", worst, "quadrature");
}

double ks_distance(std::vector<double> xs, const std::function<double(double)>& cdf) {
    std::sort(xs.begin(), xs.end());
    double worst = 0.0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double F = cdf(xs[i]);
        worst = std::max({worst, std::abs(F - i / n), std::abs((i + 1) / n - F)});
    }
    return worst;
}

void run_simulate(const RunConfig& c, Report& rep) {
    const std::string model = c.model.value_or("");
    const auto seed = rep.j["seed"].get<std::uint64_t>();
    const auto d = parse_distribution(need_dist(c, 0, "base"));
    if (model == "records") {
        const WeightFn w = c.weight ? build_weight(parse_weight_spec(*c.weight), d) : make_weight("identity");
        const int n = c.n.value_or(1);
        const auto rit = rit_identity_check(d, w, n, c.samples, seed);
        rep.add("E[wmit(X_n)] - wgce(n)", rit.estimate - rit.target, "record-identity", rit.std_error);
        const auto cov = cov_identity_check(d, w, n, c.samples, seed + 1);
        rep.add("E[phi T/tau](X_n)/n - wgce(n)", cov.tau_form.estimate - cov.tau_form.target, "record-identity",
                cov.tau_form.std_error);
        rep.add("Cov[psi,T](X_n)/n + wgce(n)", cov.cov_form.estimate - cov.cov_form.target, "record-identity",
                cov.cov_form.std_error);
        rep.violation = !rit.within(5.0) || !cov.tau_form.within(5.0) || !cov.cov_form.within(5.0);
        return;
    }
    if (model == "shock") {
        if (c.counts.empty()) throw ConfigError("field 'count' is required for the shock model");
        const auto m = make_shock_model(d, parse_count_law(c.counts[0]));
        const auto xs = simulate_shock_lifetimes(m, c.samples, seed);
        rep.add("ks distance simulation vs F_T", ks_distance(xs, [&](double t) { return shock_lifetime_cdf(m, t); }),
                "monte-carlo");
        if (c.t) rep.add("F_T(t)", shock_lifetime_cdf(m, *c.t), "quadrature");
        return;
    }
    if (model == "renewal") {
        const double t = need(c.t, "t");
        const RenewalSolution sol(RenewalModel{d, c.horizon.value_or(t), 0.0});
        rep.add("M(t)", sol.renewal_function(t), "quadrature", sol.error_estimate(t));
        // Monte Carlo count of renewals in (0, t].
        const auto counts = kernels::draw(c.samples, seed, [&](std::mt19937_64& rng) {
            double s = 0.0;
            double k = -1.0;
            while (s <= t) {
                s += d.sample(rng);
                k += 1.0;
            }
            return k;
        });
        double mean = 0.0;
        for (double k : counts) mean += k;
        mean /= static_cast<double>(counts.size());
        double var = 0.0;
        for (double k : counts) var += (k - mean) * (k - mean);
        var /= static_cast<double>(counts.size() > 1 ? counts.size() - 1 : 1);
        rep.add("M(t) (monte carlo)", mean, "monte-carlo", std::sqrt(var / static_cast<double>(counts.size())));
        if (c.x) rep.add("P(gamma(t) <= x)", sol.excess_cdf(t, *c.x), "quadrature", sol.error_estimate(t));
        return;
    }
    throw ConfigError("field 'model': expected records, shock or renewal");
}

void run_acceptance_cmd(const RunConfig& c, Report& rep) {
    AcceptanceOptions opt;
    opt.only = c.only;
    if (c.seed) opt.seed = *c.seed;
    opt.progress = &std::cerr;
    const auto results = run_acceptance(opt);
    bool all = true;
    for (const auto& r : results) {
        all = all && r.passed;
        json j{{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"checks", r.checks}};
        if (r.limit_seconds) j["limit_seconds"] = *r.limit_seconds;
        if (!r.error.empty()) j["error"] = r.error;
        rep.j["criteria"].push_back(j);
    }
    rep.j["all_passed"] = all;
}

std::string to_csv(const Report& rep) {
    std::ostringstream os;
    os.precision(17);
    os << "name,value,route,error_estimate\n";
    for (const auto& r : rep.results) {
        os << '"' << r["name"].get<std::string>() << "\",";
        if (!r["value"].is_null()) os << r["value"].get<double>();
        os << ',' << r["route"].get<std::string>() << ',' << r["error_estimate"].get<double>() << '\n';
    }
    return os.str();
}

int run(RunConfig c) {
    Report rep;
    int code = kOk;
    try {
        validate(c);
        const std::uint64_t seed = c.seed ? *c.seed : derive_seed(c);
        rep.j["schema"] = 1;
        rep.j["command"] = c.command;
        rep.j["config"] = config_json(c);
        rep.j["seed"] = seed;
        rep.j["seed_source"] = c.seed ? "explicit" : "config-hash";
        rep.j["tol"] = c.tol;
        if (c.command == "measure") {
            run_measure(c, rep);
        } else if (c.command == "order-check") {
            run_order_check(c, rep);
        } else if (c.command == "iwmit") {
            run_iwmit(c, rep);
        } else if (c.command == "reconstruct") {
            run_reconstruct(c, rep);
        } else if (c.command == "simulate") {
            run_simulate(c, rep);
        } else if (c.command == "acceptance") {
            run_acceptance_cmd(c, rep);
            if (!rep.j["all_passed"].get<bool>()) code = kFailed;
        } else {
            throw ConfigError("field 'command': unknown command '" + c.command + "'");
        }
        if (rep.violation) {
            code = kViolation;
            std::cerr << "THEOREM VIOLATION flagged; see the report\n";
        }
        rep.j["status"] = code == kOk ? "ok" : (code == kViolation ? "violation" : "failed");
    } catch (const Error& e) {
        code = e.category() == Error::Category::numerical ? kNumerical : kValidation;
        rep.j["status"] = "error";
        rep.j["error"] = e.what();
        std::cerr << "error: " << e.what() << "\n";
    }
    rep.j["results"] = rep.results;
    const std::string text = c.format == "csv" ? to_csv(rep) : rep.j.dump(2) + "\n";
    if (c.output.empty() || c.output == "-") {
        std::cout << text;
    } else {
        std::ofstream out(c.output, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write '" << c.output << "'\n";
            return kValidation;
        }
        out << text;
    }
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted mean inactivity time toolkit"};
    app.require_subcommand(0, 1);
    RunConfig c;
    std::string config_path;
    std::uint64_t seed = 0;
    app.add_option("--config", config_path, "JSON run configuration (one document per run)");
    auto add_common = [&](CLI::App* s) {
        s->add_option("--output,-o", c.output, "report path (default stdout)");
        s->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        s->add_option("--tol", c.tol, "quadrature tolerance");
        s->add_option("--seed", seed, "random seed (default: hash of the config)");
        s->add_option("--samples", c.samples, "Monte Carlo draws");
        s->add_option("--grid-points", c.grid_points, "grid size");
    };
    auto* measure = app.add_subcommand("measure", "evaluate one quantity");
    measure->add_option("--dist", c.dists, "distribution spec, e.g. exponential:rate=1 (second one for auc)")
        ->required();
    measure->add_option("--quantity", c.quantity, "quantity name")->required();
    measure->add_option("--weight", c.weight, "weight spec, e.g. power:r=2 or cdf-of");
    measure->add_option("--n", c.n, "order index");
    measure->add_option("--t", c.t, "time point");
    measure->add_option("--p", c.p, "probability level");
    add_common(measure);

    auto* order = app.add_subcommand("order-check", "verify a stochastic order on a grid");
    order->add_option("--kind", c.kind, "st, hr, rhr, mit, wmit, smit, disp, lir");
    std::string xs, ys;
    order->add_option("--x", xs, "first law")->required();
    order->add_option("--y", ys, "second law")->required();
    order->add_option("--weight", c.weight, "weight spec (wmit)");
    order->add_flag("--suite", c.suite, "run the implication suite instead of one order");
    add_common(order);

    auto* iw = app.add_subcommand("iwmit", "IWMIT classification report");
    iw->add_option("--dist", c.dists, "distribution spec")->required();
    iw->add_option("--weight", c.weight, "weight spec");
    add_common(iw);

    auto* rec = app.add_subcommand("reconstruct", "rebuild the CDF from the WMIT curve");
    rec->add_option("--dist", c.dists, "distribution spec")->required();
    rec->add_option("--weight", c.weight, "weight spec");
    add_common(rec);

    auto* sim = app.add_subcommand("simulate", "Monte Carlo checks for records, shock and renewal models");
    sim->add_option("--model", c.model, "records, shock or renewal")->required();
    sim->add_option("--dist", c.dists, "base or interarrival law")->required();
    sim->add_option("--weight", c.weight, "weight spec (records)");
    sim->add_option("--n", c.n, "record subscript");
    sim->add_option("--count", c.counts, "count law, e.g. geometric:q=0.5 (shock)");
    sim->add_option("--t", c.t, "time point (renewal)");
    sim->add_option("--x", c.x, "excess level (renewal)");
    sim->add_option("--horizon", c.horizon, "renewal horizon");
    add_common(sim);

    auto* acc = app.add_subcommand("acceptance", "run the acceptance criteria");
    acc->add_option("--only", c.only, "criterion ids");
    add_common(acc);

    CLI11_PARSE(app, argc, argv);
    try {
        if (!config_path.empty()) {
            if (!app.get_subcommands().empty()) throw ConfigError("--config cannot be combined with a subcommand");
            return run(from_config_file(config_path));
        }
        if (app.get_subcommands().empty()) {
            std::cerr << app.help();
            return kValidation;
        }
        c.command = app.get_subcommands().front()->get_name();
        if (c.command == "order-check") c.dists = {xs, ys};
        for (auto* s : app.get_subcommands()) {
            if (s->count("--seed") > 0) c.seed = seed;
        }
        return run(c);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    }
}
