// One line per acceptance criterion; exit status 1 if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "curvlab/ambient.hpp"
#include "curvlab/cli/config.hpp"
#include "curvlab/cli/runner.hpp"
#include "curvlab/rigidity.hpp"
#include "curvlab/surfaces.hpp"
#include "curvlab/symfun.hpp"
#include "curvlab/verify.hpp"

using namespace curvlab;

namespace {

constexpr double kSigmaTol = 1e-12;
constexpr double kNewtonOracleTol = 1e-10;
constexpr double kLemmaTol = 1e-12;
constexpr double kSphereHmTol = 1e-8;
constexpr double kTorusHmTol = 1e-6;
constexpr double kMinOrder = 2.0;
constexpr double kWeightedTol = 1e-6;
constexpr double kSliceTol = 1e-12;
constexpr double kAgreementTol = 1e-12;
constexpr double kBrendleTol = 1e-8;
constexpr double kBorderlineTol = 1e-9;
constexpr double kRicciTol = 1e-9;
constexpr double kSpreadTol3 = 1e-8;
constexpr double kEndpointTol = 1e-9;
constexpr double kSpreadTol4 = 1e-6;
constexpr double kSolitonTol = 1e-10;
constexpr double kOffsetBound = 0.25;
constexpr double kSlackTol = 1e-12;

constexpr double kLimit1 = 10.0;
constexpr double kLimit2 = 30.0;
constexpr double kLimit9 = 300.0;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

SurfaceSpec spec_of(SurfaceFamily f, int n, bool engine = false)
{
    SurfaceSpec s;
    s.family = std::move(f);
    s.resolution = {n};
    s.force_engine = engine;
    return s;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double subset_sigma(int k, const std::vector<double>& v, bool absolute)
{
    const int m = static_cast<int>(v.size());
    double total = 0.0;
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        if (__builtin_popcount(mask) != k) continue;
        double p = 1.0;
        for (int i = 0; i < m; ++i)
            if (mask & (1u << i)) p *= absolute ? std::abs(v[i]) : v[i];
        total += p;
    }
    return total;
}

void criterion1(Outcome& o)
{
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    double worst = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        const int m = 2 + trial % 5;
        std::vector<double> v(static_cast<std::size_t>(m));
        for (auto& x : v) x = u(rng);
        const auto e = elementary_symmetric(v, m);
        for (int k = 0; k <= m; ++k) {
            // relative to the magnitude sum, the scale of the rounding in either evaluation
            const double scale = subset_sigma(k, v, true);
            worst = std::max(worst, std::abs(e[k] - subset_sigma(k, v, false)) / scale);
        }
    }
    double worst_oracle = 0.0;
    for (int m = 2; m <= 5; ++m) {
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> v(static_cast<std::size_t>(m));
            for (auto& x : v) x = u(rng);
            const CurvatureVector lam(v);
            const Eigen::MatrixXd a = Eigen::Map<const Eigen::VectorXd>(v.data(), m).asDiagonal();
            for (int k = 1; k < m; ++k) {
                const auto t = newton_matrix_oracle(k, a);
                const auto spec = newton_spectrum(k, lam);
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j)
                        worst_oracle = std::max(worst_oracle, std::abs(t(i, j) - (i == j ? spec.eigenvalues[i] : 0.0)));
            }
        }
    }
    const double secs = seconds_since(t0);
    o.detail << "sigma max rel err " << worst << ", oracle max err " << worst_oracle << ", " << secs << " s";
    o.require(worst <= kSigmaTol, "sigma recurrence");
    o.require(worst_oracle <= kNewtonOracleTol, "Newton oracle");
    o.require(secs < kLimit1, "runtime");
}

void criterion2(Outcome& o)
{
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(202);
    double worst_ratio = std::numeric_limits<double>::infinity();
    double min_c = std::numeric_limits<double>::infinity();
    double worst_split = 0.0;
    for (int s = 0; s < 100000; ++s) {
        const int m = 2 + s % 7;
        const int p = 1 + static_cast<int>(rng() % static_cast<unsigned>(m));
        const auto lam = garding_sample(m, p, rng);
        const auto h = normalized_h_all(lam);
        for (int j = 2; j <= p; ++j) {
            for (int i = 1; i < j; ++i) {
                const double scale = std::max(std::abs(h[j - 1] / h[j]), std::abs(h[i - 1] / h[i]));
                worst_ratio = std::min(worst_ratio, maclaurin_ratio_gap(i, j, lam) / scale);
                for (int l = 0; l < m; ++l) min_c = std::min(min_c, lemma_c_gap(i, j, l, lam));
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
    }
    const double secs = seconds_since(t0);
    o.detail << "min ratio gap " << worst_ratio << ", min (2c) gap " << min_c << ", split " << worst_split << ", "
             << secs << " s";
    o.require(worst_ratio >= -kLemmaTol, "ratio gap");
    o.require(min_c > 0.0, "lemma (2c)");
    o.require(worst_split <= kLemmaTol, "splitting");
    o.require(secs < kLimit2, "runtime");
}

void criterion3(Outcome& o)
{
    double worst_sphere = 0.0;
    for (int n : {3, 4}) {
        const auto space = WarpedSpace::euclidean(n);
        for (double offset : {0.0, 0.3}) {
            const auto cloud = build_surface(spec_of(SphereSpec{offset, 1.0}, 32), space);
            for (int j = 0; j <= n - 2; ++j) {
                const auto r = classical_hm_residual(cloud, space, j);
                worst_sphere = std::max(worst_sphere, std::abs(r.residual) / r.area);
            }
        }
    }
    const auto e3 = WarpedSpace::euclidean(3);
    const auto a = classical_hm_residual(build_surface(spec_of(Torus3Spec{2.0, 0.5}, 128), e3), e3, 1);
    const auto b = classical_hm_residual(build_surface(spec_of(Torus3Spec{2.0, 0.5}, 256), e3), e3, 1);
    const double ea = std::abs(a.residual) / a.area;
    const double eb = std::abs(b.residual) / b.area;
    const auto conv = convergence_order(ea, eb);
    o.detail << "spheres max " << worst_sphere << ", torus 256 " << eb << ", order "
             << (conv.saturated ? std::string("saturated at round-off") : std::to_string(conv.order));
    o.require(worst_sphere <= kSphereHmTol, "spheres");
    o.require(eb <= kTorusHmTol, "torus residual");
    o.require(conv.at_least(kMinOrder), "torus order");
}

void criterion4(Outcome& o)
{
    const auto e3 = WarpedSpace::euclidean(3);
    const auto phi = RadialFunction::power(1.0, 2, "r^2");
    const auto torus = build_surface(spec_of(Torus3Spec{2.0, 0.5}, 256), e3);
    double torus_rel = 0.0;
    double agreement = 0.0;
    for (int k : {1, 2}) {
        torus_rel = std::max(torus_rel, std::abs(weighted_hm_residual(torus, e3, k, phi).relative));
        agreement = std::max(agreement, divergence_theorem_check(torus, e3, k, phi).agreement);
    }
    double slice_rel = 0.0;
    for (int n : {3, 4}) {
        const auto space = WarpedSpace::schwarzschild(n, 1.0);
        const auto slice = build_surface(spec_of(SliceSpec{2.0}, 16), space);
        for (int k = 1; k <= n - 1; ++k) {
            for (const auto& f : {RadialFunction::constant(1.0), phi}) {
                slice_rel = std::max(slice_rel, std::abs(weighted_hm_residual(slice, space, k, f).relative));
                agreement = std::max(agreement, divergence_theorem_check(slice, space, k, f).agreement);
            }
        }
    }
    o.detail << "torus rel " << torus_rel << ", slices rel " << slice_rel << ", divergence agreement " << agreement;
    o.require(torus_rel <= kWeightedTol, "torus");
    o.require(slice_rel <= kSliceTol, "slices");
    o.require(agreement <= kAgreementTol, "agreement");
}

void criterion5(Outcome& o)
{
    const auto e3 = WarpedSpace::euclidean(3);
    double worst_eq = 0.0;
    for (double radius : {1.0, 2.0}) {
        const auto g = brendle_gap(build_surface(spec_of(SphereSpec{0.0, radius}, 32), e3), e3, kBrendleTol);
        worst_eq = std::max(worst_eq, std::abs(g.gap) / g.area);
    }
    for (int n : {3, 4}) {
        const auto space = WarpedSpace::schwarzschild(n, 1.0);
        const auto g = brendle_gap(build_surface(spec_of(SliceSpec{2.0}, 16), space), space, kBrendleTol);
        worst_eq = std::max(worst_eq, std::abs(g.gap) / g.area);
    }
    const auto t = brendle_gap(build_surface(spec_of(Torus3Spec{2.0, 0.5}, 256), e3), e3, kBrendleTol);
    o.detail << "equality cases max |gap|/area " << worst_eq << ", torus gap " << t.gap << " (area " << t.area << ")";
    o.require(worst_eq <= kBrendleTol, "equality cases");
    o.require(t.gap > 10 * kBrendleTol * t.area, "torus margin");
}

void criterion6(Outcome& o)
{
    auto report = [](const WarpedSpace& s) { return check_conditions(s, radial_grid(s, 100)); };
    const auto s3 = report(WarpedSpace::schwarzschild(3, 1.0));
    const auto s4 = report(WarpedSpace::schwarzschild(4, 1.0));
    const auto e = report(WarpedSpace::euclidean(3));
    const auto h = WarpedSpace::hyperbolic(3);
    const auto hr = report(h);
    double ricci_h = 0.0;
    double ricci_e = 0.0;
    const auto e3 = WarpedSpace::euclidean(3);
    for (double r : radial_grid(h, 100)) {
        const auto c = ricci_coeffs(h, r);
        ricci_h = std::max({ricci_h, std::abs(c.alpha - 2.0), std::abs(c.beta)});
    }
    for (double r : radial_grid(e3, 100, 1e-3, 5.0)) {
        const auto c = ricci_coeffs(e3, r);
        ricci_e = std::max({ricci_e, std::abs(c.alpha), std::abs(c.beta)});
    }
    o.detail << "schw3 " << s3.all_pass() << " (H3 margin " << s3.h3.margin << "), schw4 " << s4.all_pass()
             << ", euclidean H1 " << e.h1.pass << " H4 " << e.h4.pass << ", hyperbolic H4 margin " << hr.h4.margin
             << ", Ricci err hyp " << ricci_h << " euc " << ricci_e;
    o.require(s3.all_pass(), "schwarzschild 3");
    o.require(s4.all_pass(), "schwarzschild 4");
    o.require(!e.h1.pass && !e.h4.pass, "euclidean");
    o.require(std::abs(hr.h4.margin) <= kBorderlineTol, "hyperbolic borderline");
    o.require(ricci_h <= kRicciTol && ricci_e <= kRicciTol, "ricci");
}

void criterion7(Outcome& o)
{
    const auto t3 = torus_profiles(spec_of(Torus3Spec{2.0, 0.5}, 256), kSpreadTol3);
    const double lo = t3.rows.front().h1;
    const double hi = t3.rows.back().h1;
    const auto t4 = torus_profiles(spec_of(Torus4Spec{2.0, 0.5}, 48), kSpreadTol4);
    o.detail << "torus3 spread " << t3.h1_radial.max_spread << ", endpoints " << lo << " " << hi << " on ["
             << t3.r_min << ", " << t3.r_max << "], torus4 spreads " << t4.h1_radial.max_spread << " "
             << t4.ratio_radial.max_spread;
    o.require(t3.h1_radial.pass && t3.h1_increasing, "torus3 radial increasing");
    o.require(std::abs(t3.r_min - 1.5) <= kEndpointTol && std::abs(t3.r_max - 2.5) <= kEndpointTol, "torus3 range");
    o.require(std::abs(lo - 2.0 / 3.0) <= kEndpointTol && std::abs(hi - 1.2) <= kEndpointTol, "torus3 endpoints");
    o.require(t4.h1_radial.pass && t4.ratio_radial.pass, "torus4 radial");
    o.require(t4.h1_increasing && t4.ratio_increasing, "torus4 increasing");
    o.require(!t3.umbilic && !t4.umbilic, "non-umbilic");
}

void criterion8(Outcome& o)
{
    const auto e4 = WarpedSpace::euclidean(4);
    const auto sphere = build_surface(spec_of(SphereSpec{}, 32), e4);
    double worst_res = 0.0;
    double worst_mu = 0.0;
    double min_slack = std::numeric_limits<double>::infinity();
    for (const auto& spec : {SolitonSpec::single(0, 1), SolitonSpec::single(1, 3), SolitonSpec::uniform(3)}) {
        const auto r = soliton_residual(sphere, spec);
        worst_res = std::max(worst_res, r.sup_residual);
        worst_mu = std::max(worst_mu, std::abs(r.mu - 1.0));
        const auto ledger = soliton_proof_chain(sphere, spec, kSlackTol);
        for (const auto& e : ledger.entries)
            if (e.applicable) min_slack = std::min(min_slack, e.min_slack);
    }
    const auto e3 = WarpedSpace::euclidean(3);
    const auto off = soliton_residual(build_surface(spec_of(SphereSpec{0.3, 1.0}, 64), e3), SolitonSpec::single(0, 1));
    const auto ell_cloud = build_surface(spec_of(EllipsoidSpec{{1.0, 1.0, 1.2}}, 64), e3);
    const auto ell = soliton_residual(ell_cloud, SolitonSpec::uniform(2));
    const auto torus = build_surface(spec_of(Torus3Spec{2.0, 0.5}, 128), e3);
    for (const auto* cloud : {&ell_cloud, &torus}) {
        for (const auto& spec : {SolitonSpec::single(0, 1), SolitonSpec::single(1, 2), SolitonSpec::uniform(2)}) {
            const auto ledger = soliton_proof_chain(*cloud, spec, kSlackTol);
            for (const char* name : {"bracket_upper", "bracket_lower", "chain_upper"})
                if (ledger.find(name)->applicable) min_slack = std::min(min_slack, ledger.find(name)->min_slack);
        }
    }
    o.detail << "sphere residual " << worst_res << ", |mu-1| " << worst_mu << ", offset sup " << off.sup_residual
             << " (mu " << off.mu << "), ellipsoid sup " << ell.sup_residual << ", min slack " << min_slack;
    o.require(worst_res <= kSolitonTol && worst_mu <= kSolitonTol, "centered spheres");
    o.require(off.sup_residual >= kOffsetBound, "offset sphere");
    o.require(ell.sup_residual > 10 * kSolitonTol, "ellipsoid");
    o.require(min_slack >= -kSlackTol, "bracket slack");
}

void criterion9(Outcome& o)
{
    double slowest = 0.0;
    auto run = [&slowest] {
        const auto t0 = std::chrono::steady_clock::now();
        auto j = cli::run_suite(cli::paper_suite(1)).to_json();
        slowest = std::max(slowest, seconds_since(t0));
        const bool pass = j.at("overall") == "pass";
        j.erase("timestamp");
        return std::pair{j.dump(), pass};
    };
    const auto [a, pass_a] = run();
    const auto [b, pass_b] = run();
    o.detail << "report bytes " << a.size() << ", identical " << (a == b) << ", suite pass " << pass_a
             << ", slowest run " << slowest << " s";
    o.require(a == b, "byte-identical");
    o.require(pass_a && pass_b, "suite verdicts");
    o.require(slowest < kLimit9, "runtime");
}

} // namespace

int main()
{
    configure_threads_from_env();
    const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
        {"symmetric-function oracle equivalence", criterion1},
        {"Newton-Maclaurin lemma suite", criterion2},
        {"classical Minkowski identities", criterion3},
        {"weighted Minkowski identity", criterion4},
        {"Heintze-Karcher type gap", criterion5},
        {"ambient conditions and Ricci", criterion6},
        {"torus counterexample", criterion7},
        {"soliton rigidity", criterion8},
        {"determinism of the built-in suite", criterion9},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            criteria[i].second(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        std::printf("criterion %zu %s: %s | %s\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL",
                    o.detail.str().c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
