#include "curvlab/ambient.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "curvlab/errors.hpp"

namespace curvlab {

class WarpingProfile {
public:
    virtual ~WarpingProfile() = default;
    virtual Warp eval(double r) const = 0;
    virtual std::optional<double> first_integral_residual(double) const { return std::nullopt; }
};

namespace {

class EuclideanProfile final : public WarpingProfile {
public:
    Warp eval(double r) const override { return {r, 1.0, 0.0}; }
};

class HyperbolicProfile final : public WarpingProfile {
public:
    Warp eval(double r) const override { return {std::sinh(r), std::cosh(r), std::sinh(r)}; }
};

class SphericalProfile final : public WarpingProfile {
public:
    Warp eval(double r) const override { return {std::sin(r), std::cos(r), -std::sin(r)}; }
};

// h'^2 = F(h) with F(h) = 1 - 2m h^{2-n} + q^2 h^{4-2n}; integrated as the
// second-order system h'' = F'(h)/2 from h(0) = largest root of F, h'(0) = 0.
class BlackHoleProfile final : public WarpingProfile {
public:
    BlackHoleProfile(int n, double mass, double charge, double r_max)
        : n_(n), mass_(mass), charge_(charge)
    {
        h0_ = horizon_radius();
        double step = 1e-3;
        for (int refine = 0; refine < 6; ++refine) {
            integrate(step, r_max);
            if (max_drift() < 1e-12) break;
            step *= 0.5;
        }
    }

    // Dense output: cubic Hermite on (h, h') for h and on (h', h'') for h'.
    Warp eval(double r) const override
    {
        const double pos = r / step_;
        auto idx = static_cast<std::size_t>(pos);
        if (idx >= h_.size() - 1) idx = h_.size() - 2;
        const double t = pos - static_cast<double>(idx);
        const double h = hermite(h_[idx], h_[idx + 1], dh_[idx], dh_[idx + 1], t);
        const double dh = hermite(dh_[idx], dh_[idx + 1], ddh_[idx], ddh_[idx + 1], t);
        return {h, dh, half_dprofile(h)};
    }

    std::optional<double> first_integral_residual(double r) const override
    {
        const Warp w = eval(r);
        return w.dh * w.dh - profile(w.h);
    }

private:
    double profile(double h) const
    {
        return 1.0 - 2.0 * mass_ * std::pow(h, 2 - n_) + charge_ * charge_ * std::pow(h, 4 - 2 * n_);
    }

    double half_dprofile(double h) const
    {
        return mass_ * (n_ - 2) * std::pow(h, 1 - n_) -
               (n_ - 2) * charge_ * charge_ * std::pow(h, 3 - 2 * n_);
    }

    double horizon_radius() const
    {
        if (!(mass_ > 0.0)) throw ConstructionError("mass parameter must be positive");
        if (charge_ == 0.0) return std::pow(2.0 * mass_, 1.0 / (n_ - 2));
        const double disc = mass_ * mass_ - charge_ * charge_;
        if (disc < 0.0) {
            throw ConstructionError("no positive root of h'^2 = F(h): q^2 > m^2 (m=" + std::to_string(mass_) +
                                    ", q=" + std::to_string(charge_) + ")");
        }
        // u = h^{2-n} solves 1 - 2 m u + q^2 u^2 = 0; the largest h is the smallest u.
        const double u = (mass_ - std::sqrt(disc)) / (charge_ * charge_);
        return std::pow(u, 1.0 / (2 - n_));
    }

    double hermite(double y0, double y1, double d0, double d1, double t) const
    {
        const double t2 = t * t;
        const double t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * step_ * d0 + (-2 * t3 + 3 * t2) * y1 +
               (t3 - t2) * step_ * d1;
    }

    void integrate(double step, double r_max)
    {
        const auto count = static_cast<std::size_t>(std::ceil(r_max / step)) + 2;
        step_ = step;
        h_.assign(count, 0.0);
        dh_.assign(count, 0.0);
        ddh_.assign(count, 0.0);
        double h = h0_;
        double v = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            h_[i] = h;
            dh_[i] = v;
            ddh_[i] = half_dprofile(h);
            const double k1h = v;
            const double k1v = half_dprofile(h);
            const double k2h = v + 0.5 * step * k1v;
            const double k2v = half_dprofile(h + 0.5 * step * k1h);
            const double k3h = v + 0.5 * step * k2v;
            const double k3v = half_dprofile(h + 0.5 * step * k2h);
            const double k4h = v + step * k3v;
            const double k4v = half_dprofile(h + step * k3h);
            h += step / 6.0 * (k1h + 2 * k2h + 2 * k3h + k4h);
            v += step / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
        }
    }

    double max_drift() const
    {
        double worst = 0.0;
        for (std::size_t i = 0; i < h_.size(); ++i) {
            worst = std::max(worst, std::abs(dh_[i] * dh_[i] - profile(h_[i])));
        }
        return worst;
    }

    int n_;
    double mass_;
    double charge_;
    double h0_ = 0.0;
    double step_ = 1e-3;
    std::vector<double> h_;
    std::vector<double> dh_;
    std::vector<double> ddh_;
};

void require_dimension(int n)
{
    if (n < 3) throw ConstructionError("ambient dimension must be >= 3, got " + std::to_string(n));
}

} // namespace

WarpedSpace::WarpedSpace(int n, SpaceKind kind, std::string name, double r_max,
                         std::shared_ptr<const WarpingProfile> profile)
    : n_(n), kind_(kind), name_(std::move(name)), r_max_(r_max), profile_(std::move(profile))
{
}

WarpedSpace WarpedSpace::euclidean(int n)
{
    require_dimension(n);
    return {n, SpaceKind::Euclidean, "euclidean", std::numeric_limits<double>::infinity(),
            std::make_shared<EuclideanProfile>()};
}

WarpedSpace WarpedSpace::hyperbolic(int n)
{
    require_dimension(n);
    return {n, SpaceKind::Hyperbolic, "hyperbolic", std::numeric_limits<double>::infinity(),
            std::make_shared<HyperbolicProfile>()};
}

WarpedSpace WarpedSpace::spherical_hemisphere(int n)
{
    require_dimension(n);
    return {n, SpaceKind::SphericalHemisphere, "spherical_hemisphere", std::numbers::pi / 2 - 1e-6,
            std::make_shared<SphericalProfile>()};
}

WarpedSpace WarpedSpace::schwarzschild(int n, double mass, double r_max)
{
    require_dimension(n);
    if (!(r_max > 0.0)) throw ConstructionError("r_max must be positive");
    return {n, SpaceKind::Schwarzschild, "schwarzschild", r_max,
            std::make_shared<BlackHoleProfile>(n, mass, 0.0, r_max)};
}

WarpedSpace WarpedSpace::reissner_nordstrom(int n, double mass, double charge, double r_max)
{
    require_dimension(n);
    if (!(r_max > 0.0)) throw ConstructionError("r_max must be positive");
    return {n, SpaceKind::ReissnerNordstrom, "reissner_nordstrom", r_max,
            std::make_shared<BlackHoleProfile>(n, mass, charge, r_max)};
}

double unit_sphere_volume(int d)
{
    const double half = 0.5 * (d + 1);
    return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

double WarpedSpace::fiber_volume() const { return unit_sphere_volume(n_ - 1); }

bool WarpedSpace::is_space_form() const
{
    return kind_ == SpaceKind::Euclidean || kind_ == SpaceKind::Hyperbolic ||
           kind_ == SpaceKind::SphericalHemisphere;
}

Warp WarpedSpace::warp(double r) const
{
    if (!(r >= 0.0) || r > r_max_) {
        throw DomainError(name_ + ": radius " + std::to_string(r) + " outside [0, " + std::to_string(r_max_) +
                          "]");
    }
    return profile_->eval(r);
}

std::optional<double> WarpedSpace::first_integral_residual(double r) const
{
    warp(r);
    return profile_->first_integral_residual(r);
}

double potential(const WarpedSpace& space, double r) { return space.warp(r).dh; }

double conformal_radial_component(const WarpedSpace& space, double r) { return space.warp(r).h; }

RicciCoefficients ricci_coeffs(const WarpedSpace& space, double r)
{
    const Warp w = space.warp(r);
    if (w.h == 0.0) throw DomainError("ricci_coeffs: h(r) = 0 is a singular point");
    const double n2 = space.dim() - 2;
    const double k = space.fiber_curvature();
    const double hh = w.ddh / w.h;
    const double tt = (k - w.dh * w.dh) / (w.h * w.h);
    return {hh - n2 * tt, n2 * (hh + tt)};
}

double ric_mixed(const WarpedSpace& space, double r, double dr_e, double dr_nu)
{
    return -ricci_coeffs(space, r).beta * dr_e * dr_nu;
}

double h3_quantity(const WarpedSpace& space, double r)
{
    const Warp w = space.warp(r);
    return 2.0 * w.ddh / w.h - (space.dim() - 2) * (space.fiber_curvature() - w.dh * w.dh) / (w.h * w.h);
}

double h4_quantity(const WarpedSpace& space, double r)
{
    const Warp w = space.warp(r);
    return w.ddh / w.h + (space.fiber_curvature() - w.dh * w.dh) / (w.h * w.h);
}

ConditionReport check_conditions(const WarpedSpace& space, std::span<const double> grid, double tol)
{
    if (grid.empty()) throw UsageError("check_conditions: empty radial grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || grid[i] > space.r_max()) {
            throw UsageError("check_conditions: grid point outside (0, r_max)");
        }
        if (i > 0 && grid[i] <= grid[i - 1]) throw UsageError("check_conditions: grid must be increasing");
    }

    ConditionReport report;
    report.tol = tol;
    report.grid.assign(grid.begin(), grid.end());

    const Warp origin = space.warp(0.0);
    report.h1.margin = std::min(-std::abs(origin.dh), origin.ddh);
    report.h1.pass = std::abs(origin.dh) <= tol && origin.ddh > tol;

    double min_dh = std::numeric_limits<double>::infinity();
    double min_h4 = std::numeric_limits<double>::infinity();
    double min_diff = std::numeric_limits<double>::infinity();
    double prev_q = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid[i];
        min_dh = std::min(min_dh, space.warp(r).dh);
        min_h4 = std::min(min_h4, h4_quantity(space, r));
        const double q = h3_quantity(space, r);
        if (i > 0) min_diff = std::min(min_diff, q - prev_q);
        prev_q = q;
    }
    report.h2 = {min_dh > tol, min_dh};
    report.h3 = {min_diff >= -tol, grid.size() > 1 ? min_diff : 0.0};
    report.h4 = {min_h4 > tol, min_h4};
    return report;
}

std::vector<double> radial_grid(const WarpedSpace& space, int count, double lo_fraction, double hi)
{
    if (count < 1) throw UsageError("radial_grid: count must be positive");
    if (hi <= 0.0) hi = std::isfinite(space.r_max()) ? space.r_max() : 10.0;
    const double lo = lo_fraction * std::min(hi, space.r_max());
    if (hi >= space.r_max()) hi = space.r_max() - lo;
    std::vector<double> grid(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        grid[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
    }
    return grid;
}

WarpedSpace make_space(std::string_view kind, const std::map<std::string, double>& params)
{
    auto get = [&](const char* key, double fallback) {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    const int n = static_cast<int>(get("n", 3));
    const double r_max = get("r_max", 20.0);
    if (kind == "euclidean") return WarpedSpace::euclidean(n);
    if (kind == "hyperbolic") return WarpedSpace::hyperbolic(n);
    if (kind == "spherical_hemisphere") return WarpedSpace::spherical_hemisphere(n);
    if (kind == "schwarzschild") {
        if (!params.count("m")) throw ConstructionError("schwarzschild requires parameter m");
        return WarpedSpace::schwarzschild(n, get("m", 0.0), r_max);
    }
    if (kind == "reissner_nordstrom") {
        if (!params.count("m") || !params.count("q")) {
            throw ConstructionError("reissner_nordstrom requires parameters m and q");
        }
        return WarpedSpace::reissner_nordstrom(n, get("m", 0.0), get("q", 0.0), r_max);
    }
    throw ConstructionError("unknown space kind '" + std::string(kind) + "'");
}

} // namespace curvlab
