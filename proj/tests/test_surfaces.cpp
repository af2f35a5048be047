#include <doctest.h>

#include <cmath>
#include <numbers>

#include "curvlab/errors.hpp"
#include "curvlab/surfaces.hpp"
#include "curvlab/verify.hpp"
#include "oracles.hpp"

using namespace curvlab;
using doctest::Approx;

namespace {

SurfaceSpec spec_of(SurfaceFamily f, std::vector<int> res, bool engine = false)
{
    SurfaceSpec s;
    s.family = std::move(f);
    s.resolution = std::move(res);
    s.force_engine = engine;
    return s;
}

double max_lambda_gap(const SurfaceSample& s)
{
    const auto v = s.lambdas.values();
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
}

} // namespace

TEST_CASE("slice samples")
{
    for (const auto& space : {WarpedSpace::schwarzschild(3, 1.0), WarpedSpace::hyperbolic(4)}) {
        const auto cloud = build_surface(spec_of(SliceSpec{1.5}, {48}), space);
        const Warp w = space.warp(1.5);
        for (const auto& s : cloud.samples) {
            for (double l : s.lambdas.values()) CHECK(l == Approx(w.dh / w.h).epsilon(1e-14));
            CHECK(s.dr_nu == 1.0);
            for (double e : s.dr_e) CHECK(e == 0.0);
            CHECK(s.support == Approx(w.h));
        }
        CHECK(cloud.area() == Approx(space.fiber_volume() * std::pow(w.h, space.dim() - 1)).epsilon(1e-12));
    }
}

TEST_CASE("sphere samples")
{
    const auto e3 = WarpedSpace::euclidean(3);
    const auto cloud = build_surface(spec_of(SphereSpec{0.0, 2.0}, {32}), e3);
    for (const auto& s : cloud.samples) {
        for (double l : s.lambdas.values()) CHECK(l == Approx(0.5).epsilon(1e-14));
        CHECK(s.support == Approx(2.0).epsilon(1e-14));
    }
    CHECK(cloud.area() == Approx(16 * std::numbers::pi).epsilon(1e-12));
}

TEST_CASE("unit sphere area on a 32x64 grid")
{
    const auto cloud = build_surface(spec_of(SphereSpec{}, {32, 64}), WarpedSpace::euclidean(3));
    CHECK(std::abs(cloud.area() - 4 * std::numbers::pi) < 1e-10);
}

TEST_CASE("torus3 closed form against the torus oracle")
{
    const auto cloud = build_surface(spec_of(Torus3Spec{2.0, 0.5}, {32}), WarpedSpace::euclidean(3));
    CHECK(std::abs(cloud.area() - 4 * std::numbers::pi * std::numbers::pi) < 1e-10);
    for (const auto& s : cloud.samples) {
        const auto want = oracle::torus3(2.0, 0.5, s.params[1]);
        CHECK(s.r == Approx(want.r).epsilon(1e-13));
        CHECK(s.support == Approx(want.support).scale(1.0).epsilon(1e-13));
        CHECK(s.dr_nu == Approx(want.dr_nu).scale(1.0).epsilon(1e-13));
        auto got = std::vector<double>(s.lambdas.values().begin(), s.lambdas.values().end());
        std::sort(got.begin(), got.end());
        auto exp = std::vector<double>(want.lambdas.begin(), want.lambdas.end());
        std::sort(exp.begin(), exp.end());
        CHECK(got[0] == Approx(exp[0]).scale(1.0).epsilon(1e-13));
        CHECK(got[1] == Approx(exp[1]).scale(1.0).epsilon(1e-13));
    }
}

TEST_CASE("torus3 outermost point")
{
    const auto cloud = build_surface(spec_of(Torus3Spec{2.0, 0.5}, {32}), WarpedSpace::euclidean(3));
    const auto e = elliptic_point_check(cloud);
    REQUIRE(e.found);
    const auto& s = cloud.samples[e.witness];
    CHECK(s.r == Approx(2.5));
    CHECK(normalized_h(1, s.lambdas) == Approx(1.2).epsilon(1e-14));
    CHECK(s.support == Approx(2.5));
    CHECK(std::max(s.lambdas[0], s.lambdas[1]) == Approx(2.0));
    CHECK(std::min(s.lambdas[0], s.lambdas[1]) == Approx(0.4));
}

TEST_CASE("immersion engine")
{
    SUBCASE("sphere via explicit chart")
    {
        const auto cloud = build_surface(spec_of(SphereSpec{0.3, 1.5}, {32}, true), WarpedSpace::euclidean(3));
        CHECK(cloud.engine_derived);
        for (const auto& s : cloud.samples)
            for (double l : s.lambdas.values()) CHECK(l == Approx(1 / 1.5).epsilon(1e-8));
        CHECK(cloud.area() == Approx(4 * std::numbers::pi * 2.25).epsilon(1e-8));
    }
    SUBCASE("torus3 against the oracle")
    {
        const auto cloud = build_surface(spec_of(Torus3Spec{2.0, 0.5}, {32}, true), WarpedSpace::euclidean(3));
        double worst = 0.0;
        for (const auto& s : cloud.samples) {
            const auto want = oracle::torus3(2.0, 0.5, s.params[1]);
            auto got = std::vector<double>(s.lambdas.values().begin(), s.lambdas.values().end());
            auto exp = std::vector<double>(want.lambdas.begin(), want.lambdas.end());
            std::sort(got.begin(), got.end());
            std::sort(exp.begin(), exp.end());
            worst = std::max({worst, std::abs(got[0] - exp[0]), std::abs(got[1] - exp[1])});
        }
        CHECK(worst < 1e-6);
    }
    SUBCASE("slice in Schwarzschild")
    {
        for (int n : {3, 4}) {
            const auto space = WarpedSpace::schwarzschild(n, 1.0);
            const auto cloud = build_surface(spec_of(SliceSpec{2.0}, {16}, true), space);
            const Warp w = space.warp(2.0);
            for (const auto& s : cloud.samples) {
                for (double l : s.lambdas.values()) CHECK(l == Approx(w.dh / w.h).epsilon(1e-7));
                CHECK(s.dr_nu == Approx(1.0).epsilon(1e-10));
            }
        }
    }
    SUBCASE("ellipsoid against the oracle")
    {
        const auto cloud = build_surface(spec_of(EllipsoidSpec{{1.0, 1.3, 2.0}}, {32}), WarpedSpace::euclidean(3));
        double worst = 0.0;
        for (const auto& s : cloud.samples) {
            const auto want = oracle::ellipsoid_curvatures(1.0, 1.3, 2.0, s.position[0], s.position[1], s.position[2]);
            const double lo = std::min(s.lambdas[0], s.lambdas[1]);
            const double hi = std::max(s.lambdas[0], s.lambdas[1]);
            worst = std::max({worst, std::abs(lo - want[0]), std::abs(hi - want[1])});
        }
        CHECK(worst < 1e-6);
    }
    SUBCASE("refinement tightens the engine error")
    {
        auto err = [](int n) {
            const auto cloud = build_surface(spec_of(Torus3Spec{2.0, 0.5}, {n}, true), WarpedSpace::euclidean(3));
            double worst = 0.0;
            for (const auto& s : cloud.samples) {
                worst = std::max(worst, std::abs(normalized_h(1, s.lambdas) -
                                                 (2.0 + std::cos(s.params[1]) / (2 + 0.5 * std::cos(s.params[1]))) / 2));
            }
            return worst;
        };
        CHECK(std::log2(err(8) / err(16)) >= 2.0);
    }
    SUBCASE("degenerate node")
    {
        Chart chart;
        chart.param_dim = 2;
        chart.ambient_dim = 3;
        chart.map = [](const double*, double* y) { y[0] = 1.0; y[1] = 0.0; y[2] = 0.0; };
        chart.outward = [](const double*, const double* y, double* dir) { std::copy(y, y + 3, dir); };
        const double node[2] = {0.1, 0.2};
        const double steps[2] = {0.01, 0.01};
        CHECK_THROWS_AS(immersion_geometry(chart, node, steps, WarpedSpace::euclidean(3)), DegenerateError);
    }
}

TEST_CASE("quadrature convergence on an engine-derived area")
{
    auto err = [](int n) {
        const auto cloud = build_surface(spec_of(EllipsoidSpec{{1.0, 1.0, 1.2}}, {n}), WarpedSpace::euclidean(3));
        return std::abs(cloud.area() - oracle::prolate_area(1.0, 1.2));
    };
    const double e16 = err(16);
    const double e32 = err(32);
    CAPTURE(e16);
    CAPTURE(e32);
    CHECK(e32 < 1e-7);
    CHECK(convergence_order(e16, e32).at_least(2.0));
}

TEST_CASE("torus4 structure from the engine")
{
    const auto cloud = build_surface(spec_of(Torus4Spec{2.0, 0.5}, {24}), WarpedSpace::euclidean(4));
    CHECK(cloud.area() == Approx(8 * std::numbers::pi * std::numbers::pi * 2.0 * 0.25).epsilon(1e-12));
    for (const auto& s : cloud.samples) {
        const double theta = s.params[1];
        auto got = std::vector<double>(s.lambdas.values().begin(), s.lambdas.values().end());
        std::sort(got.begin(), got.end());
        CHECK(got[1] == Approx(2.0).epsilon(1e-7));
        CHECK(got[2] == Approx(2.0).epsilon(1e-7));
        CHECK(got[0] == Approx(std::cos(theta) / (2 + 0.5 * std::cos(theta))).scale(1.0).epsilon(1e-7));
    }
}

TEST_CASE("sample invariants on every family")
{
    const auto e3 = WarpedSpace::euclidean(3);
    const auto s3 = WarpedSpace::schwarzschild(3, 1.0);
    const std::vector<std::pair<SurfaceSpec, WarpedSpace>> cases{
        {spec_of(SphereSpec{0.4, 1.0}, {16}), e3},
        {spec_of(Torus3Spec{2.0, 0.5}, {16}), e3},
        {spec_of(Torus3Spec{2.0, 0.5}, {16}, true), e3},
        {spec_of(EllipsoidSpec{{1.0, 1.2, 0.8}}, {16}), e3},
        {spec_of(Torus4Spec{2.0, 0.5}, {16}), WarpedSpace::euclidean(4)},
        {spec_of(SliceSpec{1.0}, {16}), s3},
        {spec_of(RadialGraphSpec{[](std::span<const double> w) { return 4 * (1 + 0.1 * w[0]); }}, {16}), s3},
    };
    for (const auto& [spec, space] : cases) {
        CAPTURE(family_name(spec));
        const auto cloud = build_surface(spec, space);
        for (const auto& s : cloud.samples) {
            double norm = s.dr_nu * s.dr_nu;
            for (double e : s.dr_e) norm += e * e;
            CHECK(norm == Approx(1.0).epsilon(1e-8));
            const double h = space.warp(s.r).h;
            CHECK(s.support == Approx(h * s.dr_nu).scale(h).epsilon(1e-13));
            for (std::size_t j = 0; j < s.xi.size(); ++j) CHECK(s.xi[j] == Approx(h * s.dr_e[j]).scale(h).epsilon(1e-13));
            CHECK(s.weight > 0.0);
        }
    }
}

TEST_CASE("umbilic detection")
{
    const auto e3 = WarpedSpace::euclidean(3);
    CHECK(is_umbilic(build_surface(spec_of(SphereSpec{0.2, 1.0}, {16}), e3)));
    CHECK(is_umbilic(build_surface(spec_of(SliceSpec{1.0}, {16}), WarpedSpace::hyperbolic(3))));
    CHECK_FALSE(is_umbilic(build_surface(spec_of(Torus3Spec{2.0, 0.5}, {16}), e3)));
    CHECK_FALSE(is_umbilic(build_surface(spec_of(EllipsoidSpec{{1.0, 1.0, 1.2}}, {16}), e3)));
    const auto sphere_engine = build_surface(spec_of(SphereSpec{}, {16}, true), e3);
    double worst = 0.0;
    for (const auto& s : sphere_engine.samples) worst = std::max(worst, max_lambda_gap(s));
    CHECK(worst < 1e-7);
}

TEST_CASE("elliptic point witnesses")
{
    const auto e3 = WarpedSpace::euclidean(3);
    const auto ell = build_surface(spec_of(EllipsoidSpec{{1.0, 1.0, 2.0}}, {32}), e3);
    const auto w = elliptic_point_check(ell);
    REQUIRE(w.found);
    const auto& s = ell.samples[w.witness];
    // the polar nodes never hit the pole itself; the witness is the node nearest to it
    for (const auto& other : ell.samples) CHECK(std::abs(other.position[2]) <= std::abs(s.position[2]));
    CHECK(std::abs(s.position[2]) > 1.95);
    for (double l : s.lambdas.values()) CHECK(l > 0.0);
    CHECK(elliptic_point_check(build_surface(spec_of(SphereSpec{}, {16}), e3)).found);
}

TEST_CASE("torus profiles")
{
    const auto prof = torus_profiles(spec_of(Torus3Spec{2.0, 0.5}, {64}), 1e-8);
    CHECK(prof.thin);
    CHECK(prof.h1_radial.pass);
    CHECK(prof.h1_increasing);
    CHECK_FALSE(prof.umbilic);
    CHECK(prof.rows.front().r == Approx(1.5));
    CHECK(prof.rows.front().h1 == Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(prof.rows.back().r == Approx(2.5));
    CHECK(prof.rows.back().h1 == Approx(1.2).epsilon(1e-12));
    CHECK(printed_torus_h1(2.0, 0.5, 2.5) == Approx(0.45));
    CHECK_THROWS_AS(torus_profiles(spec_of(SphereSpec{}, {16}), 1e-8), UsageError);
}

TEST_CASE("radial dependence grouping")
{
    const std::vector<double> r{1.0, 1.0, 2.0, 2.0, 3.0};
    const std::vector<double> q{5.0, 5.0, 6.0, 6.0, 9.0};
    const auto ok = radial_dependence(r, q, 1e-8);
    CHECK(ok.pass);
    CHECK(ok.groups == 3);
    const std::vector<double> bad{5.0, 5.5, 6.0, 6.0, 9.0};
    CHECK_FALSE(radial_dependence(r, bad, 1e-8).pass);
    const std::vector<double> distinct{1.0, 2.0, 3.0, 4.0, 5.0};
    CHECK_FALSE(radial_dependence(distinct, q, 1e-8).pass);
    const auto prof = radial_profile(r, q);
    CHECK(prof.size() == 3);
    CHECK(strictly_increasing(prof));
}

TEST_CASE("compatibility and validation errors")
{
    const auto s3 = WarpedSpace::schwarzschild(3, 1.0);
    CHECK_THROWS_AS(build_surface(spec_of(Torus3Spec{2.0, 0.5}, {16}), s3), ConstructionError);
    CHECK_THROWS_AS(build_surface(spec_of(Torus3Spec{2.0, 0.5}, {16}), WarpedSpace::euclidean(4)), ConstructionError);
    CHECK_THROWS_AS(build_surface(spec_of(Torus3Spec{0.5, 2.0}, {16}), WarpedSpace::euclidean(3)), ConstructionError);
    CHECK_THROWS_AS(build_surface(spec_of(SphereSpec{}, {16}), s3), ConstructionError);
    CHECK_THROWS_AS(build_surface(spec_of(EllipsoidSpec{{1.0, 1.0}}, {16}), WarpedSpace::euclidean(3)),
                    ConstructionError);
    CHECK_THROWS_AS(build_surface(spec_of(SliceSpec{50.0}, {16}), s3), ConstructionError);
    CHECK_THROWS_AS(build_surface(spec_of(SphereSpec{}, {4}), WarpedSpace::euclidean(3)), UsageError);
}

TEST_CASE("thinness flags")
{
    CHECK(thinness_flag(spec_of(Torus3Spec{2.0, 0.5}, {16})));
    CHECK_FALSE(thinness_flag(spec_of(Torus3Spec{2.0, 1.2}, {16})));
    CHECK(thinness_flag(spec_of(Torus4Spec{2.0, 0.5}, {16})));
    CHECK_FALSE(thinness_flag(spec_of(Torus4Spec{2.0, 0.8}, {16})));
}

TEST_CASE("serial and parallel clouds are bitwise identical")
{
    const auto spec = spec_of(Torus3Spec{2.0, 0.5}, {24}, true);
    const auto a = build_surface(spec, WarpedSpace::euclidean(3), Execution::Serial);
    const auto b = build_surface(spec, WarpedSpace::euclidean(3), Execution::Parallel);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.samples[i].weight == b.samples[i].weight);
        CHECK(a.samples[i].dr_nu == b.samples[i].dr_nu);
        CHECK(std::equal(a.samples[i].lambdas.values().begin(), a.samples[i].lambdas.values().end(),
                         b.samples[i].lambdas.values().begin()));
    }
}
