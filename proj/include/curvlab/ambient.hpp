#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace curvlab {

enum class SpaceKind { Euclidean, Hyperbolic, SphericalHemisphere, Schwarzschild, ReissnerNordstrom };

/// h, h', h'' at one radius.
struct Warp {
    double h = 0.0;
    double dh = 0.0;
    double ddh = 0.0;
};

class WarpingProfile;

/// M = S^{n-1} x [0, r_max) with metric dr^2 + h(r)^2 g_{S^{n-1}}.
/// The fiber is the unit round sphere, so K = 1 for every catalog entry.
/// Immutable; copies share the precomputed warping table.
class WarpedSpace {
public:
    static WarpedSpace euclidean(int n);
    static WarpedSpace hyperbolic(int n);
    /// Open hemisphere, domain truncated at pi/2 - 1e-6.
    static WarpedSpace spherical_hemisphere(int n);
    static WarpedSpace schwarzschild(int n, double mass, double r_max = 20.0);
    static WarpedSpace reissner_nordstrom(int n, double mass, double charge, double r_max = 20.0);

    int dim() const { return n_; }
    double fiber_curvature() const { return 1.0; }
    double r_max() const { return r_max_; }
    double fiber_volume() const;
    SpaceKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    bool is_space_form() const;
    bool is_euclidean() const { return kind_ == SpaceKind::Euclidean; }

    /// Throws DomainError for r outside [0, r_max].
    Warp warp(double r) const;

    /// h'(r)^2 - F(h(r)) for ODE-defined spaces; nullopt for closed forms.
    std::optional<double> first_integral_residual(double r) const;

private:
    WarpedSpace(int n, SpaceKind kind, std::string name, double r_max,
                std::shared_ptr<const WarpingProfile> profile);

    int n_;
    SpaceKind kind_;
    std::string name_;
    double r_max_;
    std::shared_ptr<const WarpingProfile> profile_;
};

/// Volume of the unit sphere S^{d}.
double unit_sphere_volume(int d);

/// f(r) = h'(r).
double potential(const WarpedSpace& space, double r);

/// |X| with X = h(r) d/dr.
double conformal_radial_component(const WarpedSpace& space, double r);

/// Ric = -alpha g - beta dr^2.
struct RicciCoefficients {
    double alpha = 0.0;
    double beta = 0.0;
};

RicciCoefficients ricci_coeffs(const WarpedSpace& space, double r);

/// Ric(e, nu) for ambient-orthonormal e, nu with radial components dr_e, dr_nu.
double ric_mixed(const WarpedSpace& space, double r, double dr_e, double dr_nu);

/// 2h''/h - (n-2)(K - h'^2)/h^2, the quantity whose monotonicity is (H3).
double h3_quantity(const WarpedSpace& space, double r);

/// h''/h + (K - h'^2)/h^2, the quantity required positive by (H4).
double h4_quantity(const WarpedSpace& space, double r);

struct ConditionVerdict {
    bool pass = false;
    double margin = 0.0;
};

struct ConditionReport {
    ConditionVerdict h1;
    ConditionVerdict h2;
    ConditionVerdict h3;
    ConditionVerdict h4;
    double tol = 1e-9;
    std::vector<double> grid;

    bool all_pass() const { return h1.pass && h2.pass && h3.pass && h4.pass; }
};

/// Checks (H1)-(H4). H1 is evaluated at r = 0, the rest on `grid`, which must
/// be sorted and lie in (0, r_max). H3 is accepted weakly (differences >= -tol);
/// the strict inequalities (h''(0) > 0, h' > 0, H4 > 0) require margin > tol.
ConditionReport check_conditions(const WarpedSpace& space, std::span<const double> grid, double tol = 1e-9);

/// Uniform grid of `count` points on [lo, hi] strictly inside the domain.
std::vector<double> radial_grid(const WarpedSpace& space, int count, double lo_fraction = 1e-3,
                                double hi = -1.0);

/// Catalog constructor. kind in {euclidean, hyperbolic, spherical_hemisphere,
/// schwarzschild, reissner_nordstrom}; params may contain n, m, q, r_max.
WarpedSpace make_space(std::string_view kind, const std::map<std::string, double>& params);

} // namespace curvlab
