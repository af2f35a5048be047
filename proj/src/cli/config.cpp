#include "curvlab/cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "curvlab/cli/expression.hpp"
#include "curvlab/errors.hpp"

namespace curvlab::cli {

using nlohmann::json;

namespace {

const std::set<std::string> known_ops{
    "check-conditions", "classical-hm",  "weighted-hm",      "divergence-check", "xi-ric-sign",
    "brendle",          "torus-counterexample", "radial-condition", "ratio-condition", "soliton",
    "soliton-chain",    "newton-props",  "elliptic-point"};

// Ops that run without a surface.
const std::set<std::string> surfaceless_ops{"check-conditions", "newton-props"};

double number(const json& obj, const char* key, double fallback)
{
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
    return obj.at(key).get<double>();
}

// Every string under these keys (directly or inside a map) is a radial expression.
void check_expressions(const json& params, const std::string& where)
{
    for (const char* key : {"phi", "eta", "a", "b", "c"}) {
        if (!params.contains(key)) continue;
        const json& v = params.at(key);
        auto check_one = [&](const json& e) {
            const json& text = e.is_object() ? e.at("expr") : e;
            if (!text.is_string()) throw ConfigError(where + ": expression for '" + key + "' must be a string");
            radial_function(Expression::parse(text.get<std::string>()));
        };
        if (v.is_object() && !v.contains("expr")) {
            for (const auto& [order, e] : v.items()) check_one(e);
        } else {
            check_one(v);
        }
    }
}

Resolution parse_resolution(const json& j)
{
    Resolution res;
    if (j.is_number_integer()) {
        res.coarse = j.get<int>();
    } else if (j.is_object()) {
        res.coarse = j.at("coarse").get<int>();
        if (j.contains("fine")) res.fine = j.at("fine").get<int>();
    } else {
        throw ConfigError("resolution must be an integer or {coarse, fine}");
    }
    if (res.coarse < 8) throw ConfigError("resolution must be at least 8");
    if (res.fine && *res.fine != 2 * res.coarse) {
        throw ConfigError("convergence mode needs fine = 2 x coarse, got " + std::to_string(res.coarse) + " and " +
                          std::to_string(*res.fine));
    }
    return res;
}

} // namespace

WarpedSpace build_space(const json& space)
{
    if (!space.is_object() || !space.contains("kind")) throw ConfigError("space needs a 'kind'");
    std::map<std::string, double> params;
    for (const auto& [key, value] : space.items()) {
        if (key == "kind") continue;
        if (!value.is_number()) throw ConfigError("space parameter '" + key + "' must be a number");
        params[key] = value.get<double>();
    }
    try {
        return make_space(space.at("kind").get<std::string>(), params);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("space: ") + e.what());
    }
}

SurfaceSpec build_surface_spec(const json& surface, int ambient_dim, int resolution, bool force_engine)
{
    if (!surface.is_object() || !surface.contains("family")) throw ConfigError("surface needs a 'family'");
    const auto family = surface.at("family").get<std::string>();
    SurfaceSpec spec;
    spec.resolution = {resolution};
    spec.force_engine = force_engine || surface.value("force_engine", false);
    if (family == "slice") {
        spec.family = SliceSpec{number(surface, "r0", 1.0)};
    } else if (family == "sphere") {
        spec.family = SphereSpec{number(surface, "offset", 0.0), number(surface, "radius", 1.0)};
    } else if (family == "torus3") {
        spec.family = Torus3Spec{number(surface, "r1", 2.0), number(surface, "r2", 0.5)};
    } else if (family == "torus4") {
        spec.family = Torus4Spec{number(surface, "r1", 2.0), number(surface, "r2", 0.5)};
    } else if (family == "ellipsoid") {
        auto axes = surface.at("semi_axes").get<std::vector<double>>();
        if (static_cast<int>(axes.size()) != ambient_dim) {
            throw ConfigError("ellipsoid needs " + std::to_string(ambient_dim) + " semi-axes");
        }
        spec.family = EllipsoidSpec{std::move(axes)};
    } else if (family == "radial_graph") {
        const auto expr = Expression::parse(surface.at("radius").get<std::string>());
        if (expr.uses("r")) throw ConfigError("radial_graph radius may not depend on r");
        spec.family = RadialGraphSpec{[expr](std::span<const double> omega) { return expr.eval(0.0, omega).v; },
                                      "radial_graph(" + expr.text() + ")"};
    } else {
        throw ConfigError("unknown surface family '" + family + "'");
    }
    const int fixed = family_dimension(spec);
    if (fixed != 0 && fixed != ambient_dim) {
        throw ConfigError(family + " lives in dimension " + std::to_string(fixed) + ", space has " +
                          std::to_string(ambient_dim));
    }
    return spec;
}

SuiteConfig parse_config(const json& doc)
{
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    SuiteConfig suite;
    suite.echo = doc;
    try {
        suite.id = doc.value("id", suite.id);
        suite.seed = doc.value("seed", suite.seed);
        if (doc.contains("output")) {
            suite.report_path = doc.at("output").value("report", "");
            suite.csv_dir = doc.at("output").value("csv_dir", "");
        }
        if (!doc.contains("experiments") || !doc.at("experiments").is_array() || doc.at("experiments").empty()) {
            throw ConfigError("config needs a non-empty 'experiments' array");
        }
        std::set<std::string> ids;
        int index = 0;
        for (const auto& e : doc.at("experiments")) {
            ExperimentConfig ex;
            ex.op = e.at("op").get<std::string>();
            if (!known_ops.contains(ex.op)) throw ConfigError("unknown op '" + ex.op + "'");
            ex.id = e.value("id", ex.op + "-" + std::to_string(index));
            if (!ids.insert(ex.id).second) throw ConfigError("duplicate experiment id '" + ex.id + "'");
            ex.space = e.value("space", json{{"kind", "euclidean"}, {"n", 3}});
            ex.surface = e.value("surface", json());
            if (e.contains("resolution")) ex.resolution = parse_resolution(e.at("resolution"));
            ex.tol = e.value("tol", ex.tol);
            if (!(ex.tol > 0.0)) throw ConfigError(ex.id + ": tol must be positive");
            ex.params = e.value("params", json::object());
            if (!ex.params.is_object()) throw ConfigError(ex.id + ": params must be an object");

            const bool needs_space = ex.op != "newton-props";
            if (needs_space) {
                const WarpedSpace space = build_space(ex.space);
                if (!surfaceless_ops.contains(ex.op)) {
                    if (ex.surface.is_null()) throw ConfigError(ex.id + ": op '" + ex.op + "' needs a surface");
                    build_surface_spec(ex.surface, space.dim(), ex.resolution.coarse, false);
                }
            }
            check_expressions(ex.params, ex.id);
            suite.experiments.push_back(std::move(ex));
            ++index;
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return suite;
}

SuiteConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return parse_config(doc);
}

SuiteConfig paper_suite(std::uint64_t seed)
{
    const json r3 = {{"kind", "euclidean"}, {"n", 3}};
    const json r4 = {{"kind", "euclidean"}, {"n", 4}};
    const json schw3 = {{"kind", "schwarzschild"}, {"n", 3}, {"m", 1}};
    const json schw4 = {{"kind", "schwarzschild"}, {"n", 4}, {"m", 1}};
    const json torus3 = {{"family", "torus3"}, {"r1", 2}, {"r2", 0.5}};
    const json torus4 = {{"family", "torus4"}, {"r1", 2}, {"r2", 0.5}};
    const json sphere = {{"family", "sphere"}, {"offset", 0}, {"radius", 1}};
    const json off_sphere = {{"family", "sphere"}, {"offset", 0.3}, {"radius", 1}};
    const json slice = {{"family", "slice"}, {"r0", 2}};
    const json graph = {{"family", "radial_graph"}, {"radius", "4*(1 + 0.1*w1)"}};
    const json convergence = {{"coarse", 128}, {"fine", 256}};
    const json all_orders = "all";
    // H_1 of the torus in R^3 written in r; increasing on [1.5, 2.5].
    const std::string torus_h1 = "0.5*(2 + ((r^2 - 4.25)/2)/(2 + 0.5*((r^2 - 4.25)/2)))";

    json ex = json::array();
    auto add = [&](std::string id, std::string op, json space, json surface, json resolution, double tol,
                   json params) {
        json e = {{"id", std::move(id)}, {"op", std::move(op)}, {"space", std::move(space)},
                  {"tol", tol},          {"params", std::move(params)}};
        if (!surface.is_null()) e["surface"] = std::move(surface);
        if (!resolution.is_null()) e["resolution"] = std::move(resolution);
        ex.push_back(std::move(e));
    };

    add("newton-props", "newton-props", json(), json(), json(), 1e-12,
        {{"samples", 20000}, {"m_max", 8}, {"oracle_m_max", 5}, {"oracle_tol", 1e-10}});

    add("hm-sphere-r3", "classical-hm", r3, sphere, 64, 1e-8, {{"j", all_orders}, {"normalize", "area"}});
    add("hm-offsphere-r3", "classical-hm", r3, off_sphere, 64, 1e-8, {{"j", all_orders}, {"normalize", "area"}});
    add("hm-sphere-r4", "classical-hm", r4, sphere, 32, 1e-8, {{"j", all_orders}, {"normalize", "area"}});
    add("hm-offsphere-r4", "classical-hm", r4, off_sphere, 32, 1e-8, {{"j", all_orders}, {"normalize", "area"}});
    add("hm-torus3", "classical-hm", r3, torus3, convergence, 1e-6,
        {{"j", all_orders}, {"normalize", "area"}, {"min_order", 2}});

    json torus3_engine = torus3;
    torus3_engine["force_engine"] = true;
    const json engine_convergence = {{"coarse", 32}, {"fine", 64}};
    add("hm-torus3-engine", "classical-hm", r3, torus3_engine, engine_convergence, 1e-6,
        {{"j", all_orders}, {"normalize", "area"}, {"min_order", 2}});
    add("whm-torus3-engine", "weighted-hm", r3, torus3_engine, engine_convergence, 1e-6,
        {{"k", json::array({1, 2})}, {"phi", "r^2"}, {"min_order", 2}});

    add("whm-torus3", "weighted-hm", r3, torus3, convergence, 1e-6,
        {{"k", json::array({1, 2})}, {"phi", "r^2"}, {"min_order", 2}});
    add("whm-slice-schw3", "weighted-hm", schw3, slice, 32, 1e-12, {{"k", all_orders}, {"phi", "r^2"}});
    add("whm-slice-schw4", "weighted-hm", schw4, slice, 16, 1e-12, {{"k", all_orders}, {"phi", "r^2"}});
    add("whm-graph-schw3", "weighted-hm", schw3, graph, 64, 1e-8, {{"k", all_orders}, {"phi", "r^2"}});
    add("div-torus3", "divergence-check", r3, torus3, 256, 1e-12, {{"k", json::array({1, 2})}, {"phi", "r^2"}});
    add("div-graph-schw4", "divergence-check", schw4, graph, 16, 1e-12, {{"k", all_orders}, {"phi", "r^2"}});
    add("xi-ric-graph-schw3", "xi-ric-sign", schw3, graph, 32, 1e-12, json::object());

    add("brendle-sphere-r3", "brendle", r3, sphere, 64, 1e-8, {{"expect", "equality"}});
    add("brendle-slice-schw3", "brendle", schw3, slice, 32, 1e-8, {{"expect", "equality"}});
    add("brendle-slice-schw4", "brendle", schw4, slice, 16, 1e-8, {{"expect", "equality"}});
    add("brendle-torus3", "brendle", r3, torus3, 256, 1e-8,
        {{"expect", "strict"}, {"margin_factor", 10}, {"resolutions", json::array({32, 64, 128, 256})}});

    const json ricci_zero = {{"alpha", 0}, {"beta", 0}};
    add("conditions-schw3", "check-conditions", schw3, json(), json(), 1e-9,
        {{"expect", {{"h1", true}, {"h2", true}, {"h3", true}, {"h4", true}}}});
    add("conditions-schw4", "check-conditions", schw4, json(), json(), 1e-9,
        {{"expect", {{"h1", true}, {"h2", true}, {"h3", true}, {"h4", true}}}});
    add("conditions-euclidean", "check-conditions", r3, json(), json(), 1e-9,
        {{"expect", {{"h1", false}, {"h2", true}, {"h4", false}}}, {"ricci", ricci_zero}});
    add("conditions-hyperbolic", "check-conditions", {{"kind", "hyperbolic"}, {"n", 3}}, json(), json(), 1e-9,
        {{"expect", {{"h4_borderline", true}}}, {"ricci", {{"alpha", 2}, {"beta", 0}}}});

    add("torus3-counterexample", "torus-counterexample", r3, torus3, 256, 1e-9,
        {{"spread_tol", 1e-8}, {"endpoints", json::array({2.0 / 3.0, 1.2})}});
    add("torus4-counterexample", "torus-counterexample", r4, torus4, 48, 1e-9, {{"spread_tol", 1e-6}});
    add("torus3-radial-condition", "radial-condition", r3, torus3, 128, 1e-12,
        {{"k", 1}, {"b", {{"1", "1"}}}, {"eta", {{"expr", torus_h1}, {"monotone", "increasing"}}}});
    add("sphere-ratio-condition", "ratio-condition", r4, sphere, 32, 1e-12,
        {{"a", {{"1", "1"}}}, {"b", {{"2", "1"}}}});

    add("soliton-sphere-01", "soliton", r4, sphere, 32, 1e-10, {{"weights", {{"single", {0, 1}}}}});
    add("soliton-sphere-13", "soliton", r4, sphere, 32, 1e-10, {{"weights", {{"single", {1, 3}}}}});
    add("soliton-sphere-uniform", "soliton", r4, sphere, 32, 1e-10, {{"weights", "uniform"}});
    add("soliton-offsphere", "soliton", r3, off_sphere, 64, 1e-10,
        {{"weights", {{"single", {0, 1}}}}, {"expect", "non-soliton"}, {"min_sup", 0.25}});
    add("soliton-ellipsoid", "soliton", r3, {{"family", "ellipsoid"}, {"semi_axes", {1, 1, 1.2}}}, 64, 1e-10,
        {{"weights", "uniform"}, {"expect", "non-soliton"}, {"min_sup_factor", 10}});
    add("chain-sphere-uniform", "soliton-chain", r4, sphere, 32, 1e-12, {{"weights", "uniform"}});
    add("chain-sphere-k1", "soliton-chain", r4, sphere, 32, 1e-12, {{"weights", {{"single", {0, 1}}}}});
    add("chain-ellipsoid", "soliton-chain", r3, {{"family", "ellipsoid"}, {"semi_axes", {1, 1, 1.2}}}, 64, 1e-12,
        {{"weights", "uniform"}});
    add("chain-torus3", "soliton-chain", r3, torus3, 128, 1e-12, {{"weights", "uniform"}});
    add("elliptic-torus3", "elliptic-point", r3, torus3, 64, 1e-12, json::object());

    json doc = {{"id", "paper-suite"}, {"seed", seed}, {"experiments", std::move(ex)}};
    return parse_config(doc);
}

} // namespace curvlab::cli
