#include "curvlab/cli/runner.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include "curvlab/cli/expression.hpp"
#include "curvlab/errors.hpp"
#include "curvlab/rigidity.hpp"
#include "curvlab/verify.hpp"

namespace curvlab::cli {

using nlohmann::json;

namespace {

struct Context {
    const ExperimentConfig& config;
    std::uint64_t seed;
    Execution exec;
    ExperimentRecord& record;

    const json& params() const { return config.params; }
    double tol() const { return config.tol; }

    void add(std::string name, Verdict verdict, json values, std::string note = "")
    {
        record.checks.push_back({std::move(name), verdict, std::move(values), std::move(note)});
    }
};

Verdict verdict_of(bool pass)
{
    return pass ? Verdict::Pass : Verdict::Fail;
}

std::vector<int> orders(const json& params, const char* key, int lo, int hi)
{
    if (!params.contains(key) || params.at(key) == "all") {
        std::vector<int> all;
        for (int k = lo; k <= hi; ++k) all.push_back(k);
        return all;
    }
    std::vector<int> out;
    if (params.at(key).is_array()) {
        out = params.at(key).get<std::vector<int>>();
    } else {
        out.push_back(params.at(key).get<int>());
    }
    for (int k : out) {
        if (k < lo || k > hi) {
            throw ConfigError(std::string("'") + key + "' = " + std::to_string(k) + " outside [" + std::to_string(lo) +
                              ", " + std::to_string(hi) + "]");
        }
    }
    return out;
}

json resolution_json(const std::vector<int>& res)
{
    return json(res);
}

// Grid spanning the radial range of the cloud, for expression validation.
std::vector<double> cloud_grid(const SampleCloud& cloud)
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& s : cloud.samples) {
        lo = std::min(lo, s.r);
        hi = std::max(hi, s.r);
    }
    std::vector<double> grid(65);
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = lo + (hi - lo) * static_cast<double>(i) / 64.0;
    return grid;
}

Monotonicity parse_monotone(const std::string& s)
{
    if (s == "increasing") return Monotonicity::Increasing;
    if (s == "decreasing") return Monotonicity::Decreasing;
    if (s == "none") return Monotonicity::None;
    throw ConfigError("monotone must be increasing, decreasing or none");
}

RadialFunction radial_param(const json& e, const std::vector<double>& grid, const std::string& where)
{
    const bool obj = e.is_object();
    const auto expr = Expression::parse(obj ? e.at("expr").get<std::string>() : e.get<std::string>());
    require_finite(expr, grid, where);
    return radial_function(expr, obj ? parse_monotone(e.value("monotone", "none")) : Monotonicity::None);
}

std::map<int, RadialFunction> radial_map(const json& params, const char* key, const std::vector<double>& grid)
{
    std::map<int, RadialFunction> out;
    if (!params.contains(key)) return out;
    for (const auto& [order, e] : params.at(key).items()) {
        out.emplace(std::stoi(order), radial_param(e, grid, std::string(key) + "_" + order));
    }
    return out;
}

struct Clouds {
    WarpedSpace space;
    SampleCloud coarse;
    std::optional<SampleCloud> fine;
};

Clouds build_clouds(const Context& ctx)
{
    WarpedSpace space = build_space(ctx.config.space);
    const int n = space.dim();
    auto build = [&](int res) {
        return build_surface(build_surface_spec(ctx.config.surface, n, res, false), space, ctx.exec);
    };
    Clouds c{space, build(ctx.config.resolution.coarse), std::nullopt};
    if (ctx.config.resolution.fine) c.fine = build(*ctx.config.resolution.fine);
    return c;
}

// Shared by the identity checks: normalized error per resolution and an
// optional convergence order between coarse and fine.
void identity_check(Context& ctx, const std::string& name, const std::function<IdentityResidual(const SampleCloud&)>& fn,
                    const Clouds& clouds)
{
    const bool by_area = ctx.params().value("normalize", "relative") == "area";
    auto error = [&](const IdentityResidual& r) { return by_area ? std::abs(r.residual) / r.area : r.relative; };
    const IdentityResidual coarse = fn(clouds.coarse);
    json values = {{"lhs", coarse.lhs},         {"rhs", coarse.rhs},   {"residual", coarse.residual},
                   {"error", error(coarse)},    {"area", coarse.area}, {"resolution", resolution_json(coarse.resolution)},
                   {"normalization", by_area ? "area" : "relative"}};
    double final_error = error(coarse);
    bool order_ok = true;
    if (clouds.fine) {
        const IdentityResidual fine = fn(*clouds.fine);
        final_error = error(fine);
        const ConvergenceEstimate conv = convergence_order(error(coarse), final_error);
        values["fine"] = {{"lhs", fine.lhs},
                          {"rhs", fine.rhs},
                          {"residual", fine.residual},
                          {"error", final_error},
                          {"resolution", resolution_json(fine.resolution)}};
        values["convergence_order"] = conv.order;
        values["convergence_saturated"] = conv.saturated;
        if (ctx.params().contains("min_order")) {
            order_ok = conv.at_least(ctx.params().at("min_order").get<double>());
        }
    }
    values["tol"] = ctx.tol();
    ctx.add(name, verdict_of(final_error <= ctx.tol() && order_ok), std::move(values));
}

void op_check_conditions(Context& ctx)
{
    const WarpedSpace space = build_space(ctx.config.space);
    const int count = ctx.params().value("grid_count", 100);
    const auto grid = radial_grid(space, count);
    const ConditionReport rep = check_conditions(space, grid, ctx.tol());
    const json& expect = ctx.params().value("expect", json());
    const std::pair<const char*, ConditionVerdict> conds[] = {
        {"h1", rep.h1}, {"h2", rep.h2}, {"h3", rep.h3}, {"h4", rep.h4}};
    for (const auto& [name, v] : conds) {
        json values = {{"pass", v.pass}, {"margin", v.margin}, {"tol", ctx.tol()}};
        Verdict verdict = verdict_of(v.pass);
        if (expect.is_object()) {
            if (expect.contains(name)) {
                const bool want = expect.at(name).get<bool>();
                values["expected"] = want;
                verdict = verdict_of(v.pass == want);
            } else {
                verdict = Verdict::Info;
            }
        }
        ctx.add(std::string("condition_") + name, verdict, std::move(values));
    }
    if (expect.is_object() && expect.value("h4_borderline", false)) {
        ctx.add("h4_borderline", verdict_of(std::abs(rep.h4.margin) <= ctx.tol()),
                {{"margin", rep.h4.margin}, {"tol", ctx.tol()}});
    }
    if (ctx.params().contains("ricci")) {
        const double alpha = ctx.params().at("ricci").at("alpha").get<double>();
        const double beta = ctx.params().at("ricci").at("beta").get<double>();
        double da = 0.0, db = 0.0;
        for (double r : grid) {
            const auto rc = ricci_coeffs(space, r);
            da = std::max(da, std::abs(rc.alpha - alpha));
            db = std::max(db, std::abs(rc.beta - beta));
        }
        ctx.add("ricci_coefficients", verdict_of(da <= ctx.tol() && db <= ctx.tol()),
                {{"alpha", alpha}, {"beta", beta}, {"max_alpha_error", da}, {"max_beta_error", db},
                 {"grid_points", grid.size()}, {"tol", ctx.tol()}});
    }
    ProfileTable h4{"h4_margin", {}};
    ProfileTable h3{"h3_quantity", {}};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double q4 = h4_quantity(space, grid[i]);
        h4.rows.push_back({grid[i], q4, 0.0, static_cast<long long>(i), q4 > ctx.tol() ? "positive" : "nonpositive"});
        const double q3 = h3_quantity(space, grid[i]);
        const char* step = i == 0 ? "start" : (q3 >= h3.rows.back().value - ctx.tol() ? "nondecreasing" : "decreasing");
        h3.rows.push_back({grid[i], q3, 0.0, static_cast<long long>(i), step});
    }
    ctx.record.tables.push_back(std::move(h4));
    ctx.record.tables.push_back(std::move(h3));
}

void op_classical_hm(Context& ctx)
{
    const Clouds clouds = build_clouds(ctx);
    for (int j : orders(ctx.params(), "j", 0, clouds.space.dim() - 2)) {
        identity_check(
            ctx, "classical_hm_j" + std::to_string(j),
            [&](const SampleCloud& c) { return classical_hm_residual(c, clouds.space, j, ctx.exec); }, clouds);
    }
}

RadialFunction phi_param(const Context& ctx, const SampleCloud& cloud)
{
    return radial_param(ctx.params().value("phi", json("1")), cloud_grid(cloud), "phi");
}

void op_weighted_hm(Context& ctx)
{
    const Clouds clouds = build_clouds(ctx);
    const RadialFunction phi = phi_param(ctx, clouds.coarse);
    for (int k : orders(ctx.params(), "k", 1, clouds.space.dim() - 1)) {
        identity_check(
            ctx, "weighted_hm_k" + std::to_string(k),
            [&](const SampleCloud& c) { return weighted_hm_residual(c, clouds.space, k, phi, ctx.exec); }, clouds);
    }
}

void op_divergence(Context& ctx)
{
    const Clouds clouds = build_clouds(ctx);
    const RadialFunction phi = phi_param(ctx, clouds.coarse);
    for (int k : orders(ctx.params(), "k", 1, clouds.space.dim() - 1)) {
        const DivergenceCheck d = divergence_theorem_check(clouds.coarse, clouds.space, k, phi, ctx.exec);
        ctx.add("divergence_k" + std::to_string(k), verdict_of(d.agreement <= ctx.tol()),
                {{"value", d.value},
                 {"scaled", d.scaled},
                 {"lhs_minus_rhs", d.weighted.residual},
                 {"agreement", d.agreement},
                 {"resolution", resolution_json(clouds.coarse.resolution)},
                 {"tol", ctx.tol()}});
    }
}

void op_xi_ric(Context& ctx)
{
    const Clouds clouds = build_clouds(ctx);
    const SignCheck s = xi_ric_sign_check(clouds.coarse, clouds.space, ctx.tol());
    const Verdict v = s.status == CheckStatus::Pass   ? Verdict::Pass
                      : s.status == CheckStatus::Fail ? Verdict::Fail
                                                      : Verdict::Skipped;
    ctx.add("xi_ric_sign", v, {{"min_margin", s.min_margin}, {"tol", ctx.tol()}}, s.reason);
}

void op_brendle(Context& ctx)
{
    const WarpedSpace space = build_space(ctx.config.space);
    const std::string expect = ctx.params().value("expect", "strict");
    const double factor = ctx.params().value("margin_factor", 10.0);
    auto run = [&](int res) {
        return brendle_gap(build_surface(build_surface_spec(ctx.config.surface, space.dim(), res, false), space, ctx.exec),
                           space, ctx.tol(), ctx.exec);
    };
    const BrendleGap g = run(ctx.config.resolution.coarse);
    json values = {{"f_over_h1", g.f_over_h1}, {"support", g.support}, {"gap", g.gap},
                   {"area", g.area},           {"tol", ctx.tol()},     {"expect", expect},
                   {"resolution", ctx.config.resolution.coarse}};
    bool pass = false;
    if (expect == "equality") {
        pass = std::abs(g.gap) <= ctx.tol() * g.area;
    } else if (expect == "strict") {
        values["margin_factor"] = factor;
        pass = g.gap > factor * ctx.tol() * g.area;
    } else {
        throw ConfigError("brendle expect must be 'equality' or 'strict'");
    }
    ctx.add("brendle_gap", verdict_of(pass), std::move(values));
    if (ctx.params().contains("resolutions")) {
        ProfileTable table{"brendle_gap", {}};
        long long group = 0;
        for (int res : ctx.params().at("resolutions").get<std::vector<int>>()) {
            const BrendleGap gr = res == ctx.config.resolution.coarse ? g : run(res);
            table.rows.push_back({static_cast<double>(res), gr.gap, gr.area, group++, "info"});
        }
        ctx.record.tables.push_back(std::move(table));
    }
}

ProfileTable profile_table(const std::string& quantity, const std::vector<TorusProfileRow>& rows,
                           double TorusProfileRow::*field)
{
    ProfileTable t{quantity, {}};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double v = rows[i].*field;
        const char* step = i == 0 ? "start" : (v > t.rows.back().value ? "increasing" : "not_increasing");
        t.rows.push_back({rows[i].r, v, 0.0, static_cast<long long>(i), step});
    }
    return t;
}

void op_torus(Context& ctx)
{
    const WarpedSpace space = build_space(ctx.config.space);
    const SurfaceSpec spec = build_surface_spec(ctx.config.surface, space.dim(), ctx.config.resolution.coarse, false);
    const bool torus4 = std::holds_alternative<Torus4Spec>(spec.family);
    if (!torus4 && !std::holds_alternative<Torus3Spec>(spec.family)) {
        throw ConfigError("torus-counterexample needs a torus3 or torus4 surface");
    }
    const double spread_tol = ctx.params().value("spread_tol", 1e-8);
    const TorusProfile prof = torus_profiles(spec, spread_tol, ctx.exec);
    const CounterexampleWitness w = counterexample_witness(prof);

    auto radial_values = [&](const RadialDependence& d) {
        return json{{"max_spread", d.max_spread}, {"range", d.range}, {"groups", d.groups},
                    {"largest_group", d.largest_group}, {"spread_tol", spread_tol}};
    };
    ctx.add("thin", Verdict::Info, {{"thin", prof.thin}});
    ctx.add("h1_radial", verdict_of(prof.h1_radial.pass), radial_values(prof.h1_radial));
    ctx.add("h1_increasing", verdict_of(prof.h1_increasing), {{"r_min", prof.r_min}, {"r_max", prof.r_max}});
    ctx.add("non_umbilic", verdict_of(w.non_umbilic), {{"umbilic", prof.umbilic}});
    if (torus4) {
        ctx.add("ratio_radial", verdict_of(prof.ratio_radial.pass), radial_values(prof.ratio_radial));
        ctx.add("ratio_increasing", verdict_of(prof.ratio_increasing), json::object());
    }
    ctx.add("counterexample", verdict_of(w.demonstrated() && (!torus4 || (prof.ratio_radial.pass && prof.ratio_increasing))),
            {{"radial", w.radial}, {"increasing", w.increasing}, {"non_umbilic", w.non_umbilic}, {"thin", w.thin}});
    if (ctx.params().contains("endpoints")) {
        const auto ends = ctx.params().at("endpoints").get<std::vector<double>>();
        if (ends.size() != 2) throw ConfigError("endpoints needs two values");
        const double e0 = std::abs(prof.rows.front().h1 - ends[0]);
        const double e1 = std::abs(prof.rows.back().h1 - ends[1]);
        ctx.add("h1_endpoints", verdict_of(e0 <= ctx.tol() && e1 <= ctx.tol()),
                {{"r_min", prof.rows.front().r}, {"h1_min", prof.rows.front().h1}, {"expected_min", ends[0]},
                 {"r_max", prof.rows.back().r}, {"h1_max", prof.rows.back().h1}, {"expected_max", ends[1]},
                 {"tol", ctx.tol()}});
    }
    ctx.record.tables.push_back(profile_table("h1", prof.rows, &TorusProfileRow::h1));
    ctx.record.tables.push_back(profile_table("h2_over_h1", prof.rows, &TorusProfileRow::h2_over_h1));
    if (!torus4) {
        double worst = 0.0;
        ProfileTable printed{"printed_h1", {}};
        for (std::size_t i = 0; i < prof.rows.size(); ++i) {
            const auto& row = prof.rows[i];
            worst = std::max(worst, std::abs(row.printed_h1 - row.h1));
            printed.rows.push_back({row.r, row.printed_h1, 0.0, static_cast<long long>(i), "info"});
        }
        ctx.add("printed_formula_comparison", Verdict::Info,
                {{"max_abs_difference", worst},
                 {"computed_at_r_max", prof.rows.back().h1},
                 {"printed_at_r_max", prof.rows.back().printed_h1}},
                "printed closed form compared against the computed profile; no verdict");
        ctx.record.tables.push_back(std::move(printed));
    }
}

void monotonicity_checks(Context& ctx, const WeightFamily& weights, const std::vector<double>& grid)
{
    for (const auto& [name, check] : weights.validate(grid)) {
        ctx.add("monotonicity_" + name, verdict_of(check.consistent), {{"worst_violation", check.worst_violation}});
    }
}

void op_radial_condition(Context& ctx)
{
    const Clouds clouds = build_clouds(ctx);
    const auto grid = cloud_grid(clouds.coarse);
    WeightFamily w;
    w.b = radial_map(ctx.params(), "b", grid);
    w.c = radial_map(ctx.params(), "c", grid);
    if (!ctx.params().contains("eta")) throw ConfigError("radial-condition needs 'eta'");
    w.eta = radial_param(ctx.params().at("eta"), grid, "eta");
    const int k = ctx.params().value("k", 1);
    monotonicity_checks(ctx, w, grid);
    ctx.add("eta_declared_monotonicity", Verdict::Info, {{"declared", to_string(w.eta->declared)}});
    const ConditionResidual res = radial_condition_residual(clouds.coarse, w, k);
    ctx.add("radial_condition", verdict_of(res.normalized_sup <= ctx.tol()),
            {{"sup", res.sup}, {"normalized_sup", res.normalized_sup}, {"witness", res.witness}, {"tol", ctx.tol()}});
}

void op_ratio_condition(Context& ctx)
{
    const Clouds clouds = build_clouds(ctx);
    const auto grid = cloud_grid(clouds.coarse);
    WeightFamily w;
    w.a = radial_map(ctx.params(), "a", grid);
    w.b = radial_map(ctx.params(), "b", grid);
    monotonicity_checks(ctx, w, grid);
    const ConditionResidual res = ratio_condition_residual(clouds.coarse, w);
    ctx.add("ratio_condition", verdict_of(res.normalized_sup <= ctx.tol()),
            {{"sup", res.sup}, {"normalized_sup", res.normalized_sup}, {"witness", res.witness}, {"tol", ctx.tol()}});
}

SolitonSpec soliton_spec(const json& params, int m)
{
    const json& w = params.value("weights", json("uniform"));
    SolitonSpec spec;
    if (w == "uniform") {
        spec = SolitonSpec::uniform(m);
    } else if (w.is_object() && w.contains("single")) {
        const auto p = w.at("single").get<std::vector<int>>();
        if (p.size() != 2) throw ConfigError("single needs [i, j]");
        spec = SolitonSpec::single(p[0], p[1]);
    } else if (w.is_object() && w.contains("terms")) {
        for (const auto& t : w.at("terms")) spec.terms.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<double>()});
    } else {
        throw ConfigError("weights must be 'uniform', {single: [i, j]} or {terms: [[i, j, a], ...]}");
    }
    if (params.contains("mu")) spec.mu = params.at("mu").get<double>();
    return spec;
}

void op_soliton(Context& ctx)
{
    const Clouds clouds = build_clouds(ctx);
    const SolitonSpec spec = soliton_spec(ctx.params(), clouds.space.dim() - 1);
    const SolitonResult res = soliton_residual(clouds.coarse, spec, ctx.exec);
    const std::string expect = ctx.params().value("expect", "soliton");
    json values = {{"mu", res.mu},           {"fitted", res.fitted},     {"sup_residual", res.sup_residual},
                   {"integral_residual", res.integral_residual},         {"witness", res.witness},
                   {"top_order", spec.top_order()},                      {"tol", ctx.tol()}};
    bool pass = false;
    if (expect == "soliton") {
        pass = res.sup_residual <= ctx.tol() && std::abs(res.mu - 1.0) <= ctx.tol();
    } else if (expect == "non-soliton") {
        const double bound = ctx.params().contains("min_sup") ? ctx.params().at("min_sup").get<double>()
                                                              : ctx.params().value("min_sup_factor", 10.0) * ctx.tol();
        values["min_sup"] = bound;
        pass = res.sup_residual >= bound;
    } else {
        throw ConfigError("soliton expect must be 'soliton' or 'non-soliton'");
    }
    values["expect"] = expect;
    ctx.add("soliton_residual", verdict_of(pass), std::move(values));
}

void op_soliton_chain(Context& ctx)
{
    const Clouds clouds = build_clouds(ctx);
    const SolitonSpec spec = soliton_spec(ctx.params(), clouds.space.dim() - 1);
    const double soliton_tol = ctx.params().value("soliton_tol", 1e-8);
    const ProofLedger ledger = soliton_proof_chain(clouds.coarse, spec, ctx.tol(), soliton_tol, ctx.exec);
    ctx.add("ledger", Verdict::Info,
            {{"top_order", ledger.top_order}, {"mu", ledger.mu}, {"excluded_samples", ledger.excluded_samples}});
    for (const auto& e : ledger.entries) {
        ctx.add(e.name, e.applicable ? verdict_of(e.holds) : Verdict::Info,
                {{"min_slack", e.min_slack}, {"applicable", e.applicable}, {"holds", e.holds}, {"tol", ctx.tol()}},
                e.note);
    }
}

double brute_sigma(int k, std::span<const double> v)
{
    const int m = static_cast<int>(v.size());
    double total = 0.0;
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        if (std::popcount(mask) != k) continue;
        double p = 1.0;
        for (int i = 0; i < m; ++i) {
            if (mask & (1u << i)) p *= v[static_cast<std::size_t>(i)];
        }
        total += p;
    }
    return total;
}

void op_newton_props(Context& ctx)
{
    const int samples = ctx.params().value("samples", 10000);
    const int m_max = ctx.params().value("m_max", 8);
    const int oracle_m = ctx.params().value("oracle_m_max", 5);
    const double oracle_tol = ctx.params().value("oracle_tol", 1e-10);
    if (m_max < 2 || m_max > 12 || samples < 1) throw ConfigError("newton-props needs samples >= 1, 2 <= m_max <= 12");
    std::mt19937_64 rng(ctx.params().value("seed", ctx.seed));
    std::uniform_int_distribution<int> pick_m(2, m_max);

    double worst_ratio = std::numeric_limits<double>::infinity();
    double worst_lemma_c = worst_ratio;
    double worst_split = 0.0;
    double worst_sigma = 0.0;
    for (int s = 0; s < samples; ++s) {
        const int m = pick_m(rng);
        const int p = std::uniform_int_distribution<int>(1, m)(rng);
        const CurvatureVector lam = garding_sample(m, p, rng);
        const auto h = normalized_h_all(lam);
        for (int j = 2; j <= p; ++j) {
            for (int i = 1; i < j; ++i) {
                const double scale = std::max(std::abs(h[j - 1] / h[j]), std::abs(h[i - 1] / h[i]));
                worst_ratio = std::min(worst_ratio, maclaurin_ratio_gap(i, j, lam) / scale);
                for (int l = 0; l < m; ++l) worst_lemma_c = std::min(worst_lemma_c, lemma_c_gap(i, j, l, lam));
            }
        }
        for (int i = 1; i < m; ++i) {
            for (int l = 0; l < m; ++l) {
                const double a = static_cast<double>(i) / m * lam[l] * restricted_h(i - 1, l, lam);
                const double b = static_cast<double>(m - i) / m * restricted_h(i, l, lam);
                const double scale = std::max({std::abs(h[i]), std::abs(a), std::abs(b)});
                worst_split = std::max(worst_split, std::abs(splitting_residual(i, l, lam)) / scale);
            }
        }
        const auto sig = elementary_symmetric(lam.values(), m);
        for (int k = 0; k <= m; ++k) {
            const double bf = brute_sigma(k, lam.values());
            worst_sigma = std::max(worst_sigma, std::abs(sig[static_cast<std::size_t>(k)] - bf) / std::max(std::abs(bf), 1e-300));
        }
    }
    const double tol = ctx.tol();
    ctx.add("sigma_recurrence", verdict_of(worst_sigma <= tol), {{"max_relative_error", worst_sigma}, {"tol", tol}});
    ctx.add("maclaurin_ratio_gap", verdict_of(worst_ratio >= -tol), {{"min_relative_gap", worst_ratio}, {"tol", tol}});
    ctx.add("lemma_c_gap", verdict_of(worst_lemma_c > 0.0), {{"min_gap", worst_lemma_c}});
    ctx.add("splitting_identity", verdict_of(worst_split <= tol), {{"max_relative_residual", worst_split}, {"tol", tol}});

    double worst_oracle = 0.0;
    std::uniform_real_distribution<double> entry(-2.0, 2.0);
    for (int m = 2; m <= oracle_m; ++m) {
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> v(static_cast<std::size_t>(m));
            for (auto& x : v) x = entry(rng);
            const CurvatureVector lam(v);
            Eigen::MatrixXd a = Eigen::Map<const Eigen::VectorXd>(v.data(), m).asDiagonal();
            for (int k = 1; k < m; ++k) {
                const Eigen::MatrixXd t = newton_matrix_oracle(k, a);
                const auto spec = newton_spectrum(k, lam);
                Eigen::MatrixXd diff = t;
                for (int i = 0; i < m; ++i) diff(i, i) -= spec.eigenvalues[static_cast<std::size_t>(i)];
                worst_oracle = std::max(worst_oracle, diff.cwiseAbs().maxCoeff());
            }
        }
    }
    ctx.add("newton_oracle_diagonal", verdict_of(worst_oracle <= oracle_tol),
            {{"max_abs_error", worst_oracle}, {"tol", oracle_tol}, {"m_max", oracle_m}});
    ctx.add("sample_count", Verdict::Info, {{"samples", samples}, {"m_max", m_max}});
}

void op_elliptic(Context& ctx)
{
    const Clouds clouds = build_clouds(ctx);
    const EllipticPoint e = elliptic_point_check(clouds.coarse);
    const auto& s = clouds.coarse.samples[e.witness];
    ctx.add("elliptic_point", verdict_of(e.found),
            {{"witness", e.witness}, {"r", s.r}, {"lambdas", std::vector<double>(s.lambdas.values().begin(), s.lambdas.values().end())}});
}

} // namespace

ExperimentRecord run_experiment(const ExperimentConfig& config, std::uint64_t seed, Execution exec)
{
    ExperimentRecord record{config.id, config.op, {}, {}};
    Context ctx{config, seed, exec, record};
    const std::map<std::string, void (*)(Context&)> ops{
        {"check-conditions", op_check_conditions}, {"classical-hm", op_classical_hm},
        {"weighted-hm", op_weighted_hm},           {"divergence-check", op_divergence},
        {"xi-ric-sign", op_xi_ric},                {"brendle", op_brendle},
        {"torus-counterexample", op_torus},        {"radial-condition", op_radial_condition},
        {"ratio-condition", op_ratio_condition},   {"soliton", op_soliton},
        {"soliton-chain", op_soliton_chain},       {"newton-props", op_newton_props},
        {"elliptic-point", op_elliptic}};
    const auto it = ops.find(config.op);
    if (it == ops.end()) throw ConfigError("unknown op '" + config.op + "'");
    try {
        it->second(ctx);
    } catch (const PreconditionError& e) {
        record.checks.push_back({"hypothesis", Verdict::Violated, json::object(), e.what()});
    } catch (const DegenerateError& e) {
        record.checks.push_back({"hypothesis", Verdict::Violated, json::object(), e.what()});
    } catch (const SamplingError& e) {
        record.checks.push_back({"sampling", Verdict::Fail, json::object(), e.what()});
    } catch (const ConfigError&) {
        throw;
    } catch (const std::domain_error& e) {
        throw ConfigError(config.id + ": " + e.what());
    } catch (const UsageError& e) {
        throw ConfigError(config.id + ": " + e.what());
    } catch (const ConstructionError& e) {
        throw ConfigError(config.id + ": " + e.what());
    } catch (const json::exception& e) {
        throw ConfigError(config.id + ": " + e.what());
    }
    return record;
}

VerificationReport run_suite(const SuiteConfig& suite, Execution exec)
{
    VerificationReport report;
    report.id = suite.id;
    report.timestamp = utc_timestamp();
    report.config = suite.echo;
    for (const auto& e : suite.experiments) report.experiments.push_back(run_experiment(e, suite.seed, exec));
    return report;
}

} // namespace curvlab::cli
