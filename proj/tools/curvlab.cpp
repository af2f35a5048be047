#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "curvlab/cli/config.hpp"
#include "curvlab/cli/report.hpp"
#include "curvlab/cli/runner.hpp"
#include "curvlab/errors.hpp"

using nlohmann::json;
namespace cli = curvlab::cli;

namespace {

struct SpaceOptions {
    std::string kind = "euclidean";
    int n = 3;
    std::optional<double> mass;
    std::optional<double> charge;

    void attach(CLI::App* app)
    {
        app->add_option("--space", kind, "euclidean | hyperbolic | spherical_hemisphere | schwarzschild | reissner_nordstrom")
            ->capture_default_str();
        app->add_option("--n", n, "ambient dimension")->capture_default_str();
        app->add_option("--m", mass, "mass parameter");
        app->add_option("--q", charge, "charge parameter");
    }

    json to_json() const
    {
        json j = {{"kind", kind}, {"n", n}};
        if (mass) j["m"] = *mass;
        if (charge) j["q"] = *charge;
        return j;
    }
};

struct SurfaceOptions {
    std::string family;
    std::map<const CLI::App*, std::string> defaults;
    double r0 = 2.0;
    double offset = 0.0;
    double radius = 1.0;
    double r1 = 2.0;
    double r2 = 0.5;
    std::vector<double> axes;
    std::string graph = "1";
    bool force_engine = false;

    void attach(CLI::App* app, const std::string& default_family)
    {
        defaults[app] = default_family;
        app->add_option("--surface", family, "slice | sphere | torus3 | torus4 | ellipsoid | radial_graph")
            ->default_str(default_family);
        app->add_option("--r0", r0, "slice radius")->capture_default_str();
        app->add_option("--offset", offset, "sphere centre offset along the last axis")->capture_default_str();
        app->add_option("--radius", radius, "sphere radius")->capture_default_str();
        app->add_option("--R1", r1, "torus core radius")->capture_default_str();
        app->add_option("--R2", r2, "torus tube radius")->capture_default_str();
        app->add_option("--axes", axes, "ellipsoid semi-axes");
        app->add_option("--graph", graph, "radial graph radius in w1..wn, theta")->capture_default_str();
        app->add_flag("--force-engine", force_engine, "use the immersion engine for closed-form families");
    }

    void resolve(const CLI::App* app)
    {
        if (family.empty() && defaults.count(app)) family = defaults.at(app);
    }

    json to_json() const
    {
        json j = {{"family", family}, {"force_engine", force_engine}};
        if (family == "slice") j["r0"] = r0;
        if (family == "sphere") j.update({{"offset", offset}, {"radius", radius}});
        if (family == "torus3" || family == "torus4") j.update({{"r1", r1}, {"r2", r2}});
        if (family == "ellipsoid") j["semi_axes"] = axes;
        if (family == "radial_graph") j["radius"] = graph;
        return j;
    }
};

struct OutputOptions {
    std::string report;
    std::string csv_dir;

    void attach(CLI::App* app)
    {
        app->add_option("--out", report, "JSON report path");
        app->add_option("--csv-dir", csv_dir, "directory for CSV profile tables");
    }
};

void print_summary(const cli::VerificationReport& report)
{
    for (const auto& e : report.experiments) {
        std::cout << e.id << " [" << e.op << "]: " << cli::to_string(e.verdict()) << '\n';
        for (const auto& c : e.checks) {
            std::cout << "  " << c.name << ": " << cli::to_string(c.verdict);
            if (!c.note.empty()) std::cout << " (" << c.note << ')';
            std::cout << '\n';
        }
    }
    std::cout << "overall: " << (report.overall_pass() ? "pass" : "fail") << '\n';
}

int execute(const cli::SuiteConfig& suite, const OutputOptions& out)
{
    const auto report = cli::run_suite(suite);
    cli::write_outputs(report, out.report.empty() ? suite.report_path : out.report,
                       out.csv_dir.empty() ? suite.csv_dir : out.csv_dir);
    print_summary(report);
    return report.overall_pass() ? 0 : 1;
}

json single(const std::string& op, const json& space, const json& surface, const json& resolution, double tol,
            const json& params, std::uint64_t seed)
{
    json e = {{"id", op}, {"op", op}, {"space", space}, {"tol", tol}, {"params", params}};
    if (!surface.is_null()) e["surface"] = surface;
    if (!resolution.is_null()) e["resolution"] = resolution;
    return {{"id", op}, {"seed", seed}, {"experiments", json::array({e})}};
}

json resolution_json(int coarse, bool convergence)
{
    if (!convergence) return coarse;
    return {{"coarse", coarse}, {"fine", 2 * coarse}};
}

} // namespace

int main(int argc, char** argv)
{
    curvlab::configure_threads_from_env();
    CLI::App app{"curvlab: curvature identities and rigidity checks on warped products"};
    app.require_subcommand(1);

    std::string config_path;
    std::string report_path;
    std::string quantity;
    std::string plot_out;
    int resolution = 64;
    double tol = 1e-8;
    std::uint64_t seed = 1;
    bool convergence = false;
    std::vector<int> orders;
    std::string phi = "r^2";
    std::string weights = "uniform";
    std::vector<int> pair;
    std::string expect;
    int samples = 10000;
    int m_max = 8;
    double spread_tol = 1e-8;

    SpaceOptions space;
    SurfaceOptions surface;
    OutputOptions out;

    auto* run = app.add_subcommand("run", "run every experiment in a config file");
    run->add_option("--config", config_path, "JSON config")->required();
    out.attach(run);

    auto* plot = app.add_subcommand("plot", "plot a profile table from a report as SVG");
    plot->add_option("--report", report_path, "JSON report")->required();
    plot->add_option("--quantity", quantity, "table name, optionally prefixed by <experiment>_")->required();
    plot->add_option("--out", plot_out, "SVG path")->required();

    auto* cond = app.add_subcommand("check-conditions", "evaluate (H1)-(H4) for a catalog space");
    space.attach(cond);
    cond->add_option("--tol", tol)->capture_default_str();
    out.attach(cond);

    auto add_surface_cmd = [&](const std::string& name, const std::string& help, const std::string& family) {
        auto* sub = app.add_subcommand(name, help);
        space.attach(sub);
        surface.attach(sub, family);
        sub->add_option("--resolution", resolution, "base quadrature resolution")->capture_default_str();
        sub->add_option("--tol", tol)->capture_default_str();
        sub->add_option("--seed", seed)->capture_default_str();
        out.attach(sub);
        return sub;
    };
    auto* hm = add_surface_cmd("verify-hm", "classical Minkowski identities (Euclidean)", "sphere");
    hm->add_option("--j", orders, "orders j (default all)");
    hm->add_flag("--convergence", convergence, "also run at twice the resolution");
    auto* whm = add_surface_cmd("verify-weighted-hm", "weighted Minkowski identity", "sphere");
    whm->add_option("--k", orders, "orders k (default all)");
    whm->add_option("--phi", phi, "radial weight expression")->capture_default_str();
    whm->add_flag("--convergence", convergence, "also run at twice the resolution");
    auto* brendle = add_surface_cmd("brendle", "Heintze-Karcher type gap", "sphere");
    brendle->add_option("--expect", expect, "equality | strict")->default_str("strict");
    auto* torus = add_surface_cmd("torus-counterexample", "radial H_1 profile of a torus", "torus3");
    torus->add_option("--spread-tol", spread_tol)->capture_default_str();
    auto* soliton = add_surface_cmd("soliton-check", "soliton residual and proof-chain ledger", "sphere");
    soliton->add_option("--weights", weights, "uniform | single")->capture_default_str();
    soliton->add_option("--pair", pair, "i j for --weights single")->expected(2);
    soliton->add_option("--expect", expect, "soliton | non-soliton")->default_str("soliton");

    auto* newton = app.add_subcommand("newton-props", "random Garding-cone sweep of the symmetric-function lemmas");
    newton->add_option("--samples", samples)->capture_default_str();
    newton->add_option("--m-max", m_max)->capture_default_str();
    newton->add_option("--seed", seed)->capture_default_str();
    newton->add_option("--tol", tol)->default_str("1e-12");
    out.attach(newton);

    auto* suite = app.add_subcommand("paper-suite", "built-in verification battery");
    suite->add_option("--seed", seed)->capture_default_str();
    out.attach(suite);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*run) return execute(cli::load_config(config_path), out);
        if (*plot) {
            std::ifstream in(report_path);
            if (!in) throw cli::ConfigError("cannot open report '" + report_path + "'");
            const std::string svg = cli::plot_svg(json::parse(in), quantity);
            std::ofstream(plot_out) << svg;
            return 0;
        }
        if (*suite) return execute(cli::paper_suite(seed), out);

        const bool tol_given = app.get_subcommands().front()->count("--tol") > 0;
        surface.resolve(app.get_subcommands().front());
        json doc;
        if (*cond) {
            doc = single("check-conditions", space.to_json(), json(), json(), tol, json::object(), seed);
        } else if (*hm) {
            json params = {{"normalize", "area"}};
            if (!orders.empty()) params["j"] = orders;
            doc = single("classical-hm", space.to_json(), surface.to_json(), resolution_json(resolution, convergence),
                         tol, params, seed);
        } else if (*whm) {
            json params = {{"phi", phi}};
            if (!orders.empty()) params["k"] = orders;
            doc = single("weighted-hm", space.to_json(), surface.to_json(), resolution_json(resolution, convergence),
                         tol, params, seed);
        } else if (*brendle) {
            doc = single("brendle", space.to_json(), surface.to_json(), resolution, tol,
                         {{"expect", expect.empty() ? "strict" : expect}}, seed);
        } else if (*torus) {
            json sp = space.to_json();
            sp["n"] = surface.family == "torus4" ? 4 : 3;
            doc = single("torus-counterexample", sp, surface.to_json(), resolution, tol_given ? tol : 1e-9,
                         {{"spread_tol", spread_tol}}, seed);
        } else if (*soliton) {
            json w = weights == "single" ? json{{"single", pair.empty() ? std::vector<int>{0, 1} : pair}} : json(weights);
            json e = single("soliton", space.to_json(), surface.to_json(), resolution, tol,
                            {{"weights", w}, {"expect", expect.empty() ? "soliton" : expect}}, seed);
            json chain = e["experiments"][0];
            chain["id"] = "soliton-chain";
            chain["op"] = "soliton-chain";
            chain["tol"] = 1e-12;
            chain["params"] = {{"weights", w}};
            e["experiments"].push_back(chain);
            doc = e;
        } else if (*newton) {
            doc = single("newton-props", json(), json(), json(), tol_given ? tol : 1e-12,
                         {{"samples", samples}, {"m_max", m_max}}, seed);
        }
        return execute(cli::parse_config(doc), out);
    } catch (const cli::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const curvlab::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
