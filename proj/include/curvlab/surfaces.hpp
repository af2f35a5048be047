#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "curvlab/ambient.hpp"
#include "curvlab/parallel.hpp"
#include "curvlab/symfun.hpp"

namespace curvlab {

/// One quadrature node on a hypersurface. Vectors are indexed by the principal
/// frame: lambdas[j], dr_e[j] and xi[j] all refer to the same direction e_j.
struct SurfaceSample {
    double r = 0.0;
    double weight = 0.0;          ///< quadrature weight times area element
    CurvatureVector lambdas;      ///< w.r.t. the outward unit normal
    double dr_nu = 0.0;           ///< <d/dr, nu>
    std::vector<double> dr_e;     ///< <d/dr, e_j>
    double support = 0.0;         ///< <X, nu> = h(r) dr_nu
    std::vector<double> xi;       ///< tangential part of X, h(r) dr_e[j]
    std::vector<double> position; ///< model coordinates y = r * omega
    std::vector<double> params;   ///< chart parameters of the node
};

struct SliceSpec {
    double r0 = 1.0;
};

/// Euclidean round sphere centred at offset * e_n.
struct SphereSpec {
    double offset = 0.0;
    double radius = 1.0;
};

/// Circular torus in R^3, core circle radius r1, tube radius r2.
struct Torus3Spec {
    double r1 = 2.0;
    double r2 = 0.5;
};

/// S^1 x S^2 tube in R^4 around the circle of radius r1 in the x1x2 plane.
struct Torus4Spec {
    double r1 = 2.0;
    double r2 = 0.5;
};

struct EllipsoidSpec {
    std::vector<double> semi_axes;
};

/// r = rho(omega) over the fiber sphere; rho receives the unit vector omega.
struct RadialGraphSpec {
    std::function<double(std::span<const double>)> radius;
    std::string label = "radial_graph";
};

using SurfaceFamily =
    std::variant<SliceSpec, SphereSpec, Torus3Spec, Torus4Spec, EllipsoidSpec, RadialGraphSpec>;

struct SurfaceSpec {
    SurfaceFamily family;
    /// Either one base resolution N, expanded per family, or one entry per
    /// chart direction.
    std::vector<int> resolution{64};
    /// Use the immersion engine even when closed-form curvature exists.
    bool force_engine = false;
};

std::string family_name(const SurfaceSpec& spec);

/// Ambient dimension implied by the family (0 when it follows the space).
int family_dimension(const SurfaceSpec& spec);

/// Thinness flags: torus3 r2 < r1/2, torus4 r2 < r1/3; true for other families.
bool thinness_flag(const SurfaceSpec& spec);

struct SampleCloud {
    std::string family;
    int ambient_dim = 0;
    std::vector<int> resolution;
    bool engine_derived = false;
    bool embedded = true;
    std::vector<SurfaceSample> samples;

    std::size_t size() const { return samples.size(); }
    double area() const;
};

/// Parametrization in model coordinates y = r * omega, plus an outward hint:
/// any direction (in y coordinates) with positive inner product with nu.
struct Chart {
    int param_dim = 0;
    int ambient_dim = 0;
    std::function<void(const double* u, double* y)> map;
    std::function<void(const double* u, const double* y, double* dir)> outward;
};

Chart chart_for(const SurfaceSpec& spec, const WarpedSpace& space);

/// Pointwise output of the immersion engine. Vectors of the ambient tangent
/// space are stored in the orthonormal representation (dr, h * d omega) in
/// R^{n+1}; index 0 is the radial component.
struct PointGeometry {
    double r = 0.0;
    std::vector<double> position;
    double area_element = 0.0;
    std::vector<double> lambdas;
    std::vector<double> dr_e;
    double dr_nu = 0.0;
    Eigen::VectorXd normal;
    Eigen::MatrixXd directions;
};

/// Shape operator of the chart image at one node: metric, outward normal,
/// second fundamental form from the warped Levi-Civita connection, principal
/// curvatures from A v = lambda g v. Derivatives are centered differences with
/// one Richardson step; `steps` holds the base step per chart direction.
/// Sign convention: the unit sphere in R^n has lambda = +1.
PointGeometry immersion_geometry(const Chart& chart, std::span<const double> node, std::span<const double> steps,
                                 const WarpedSpace& space);

struct QuadratureNode {
    std::vector<double> params;
    double weight = 0.0;
};

struct QuadratureGrid {
    std::vector<QuadratureNode> nodes;
    std::vector<double> fd_steps;     ///< node spacing / 8 per direction
    bool includes_area_element = false;
};

/// Periodic directions use the trapezoid rule, polar angles Gauss-Legendre.
/// Closed-form families get the analytic area element folded into the weights.
QuadratureGrid quadrature_grid(const SurfaceSpec& spec, const WarpedSpace& space);

/// Per-direction resolution after expanding a single base value.
std::vector<int> expand_resolution(const SurfaceSpec& spec, int ambient_dim);

SampleCloud build_surface(const SurfaceSpec& spec, const WarpedSpace& space,
                          Execution exec = Execution::Parallel);

struct EllipticPoint {
    bool found = false;
    std::size_t witness = 0;
};

/// Sample with the largest r; found iff all its principal curvatures are positive.
EllipticPoint elliptic_point_check(const SampleCloud& cloud);

/// True when every sample satisfies max lambda - min lambda < tol.
bool is_umbilic(const SampleCloud& cloud, double tol = 1e-7);

struct RadialDependence {
    bool pass = false;
    double max_spread = 0.0;
    double range = 0.0;
    std::size_t groups = 0;
    std::size_t largest_group = 0;
};

/// Groups samples whose r agree to within group_tol * range(r) and requires
/// the in-group spread of q to stay below spread_tol * range(q). At least one
/// group must hold two or more samples, otherwise the check is vacuous and fails.
RadialDependence radial_dependence(std::span<const double> r, std::span<const double> q, double spread_tol,
                                   double group_tol = 1e-10);

/// Group means of q over equal-r groups, sorted by r.
std::vector<std::pair<double, double>> radial_profile(std::span<const double> r, std::span<const double> q,
                                                      double group_tol = 1e-10);

/// Strictly increasing consecutive values.
bool strictly_increasing(const std::vector<std::pair<double, double>>& profile);

/// The closed-form expression printed for the torus H_1 profile in R^3.
double printed_torus_h1(double r1, double r2, double r);

struct TorusProfileRow {
    double r = 0.0;
    double h1 = 0.0;
    double h2_over_h1 = 0.0;
    double printed_h1 = 0.0; ///< NaN for torus4
};

struct TorusProfile {
    std::string family;
    bool thin = false;
    std::vector<TorusProfileRow> rows; ///< one per distinct radius, sorted
    RadialDependence h1_radial;
    RadialDependence ratio_radial;
    bool h1_increasing = false;
    bool ratio_increasing = false;
    bool umbilic = false;
    double r_min = 0.0;
    double r_max = 0.0;
};

/// Builds the torus in its Euclidean space and reduces H_1 and H_2/H_1 to
/// radial profiles. spread_tol applies to both radial-dependence checks.
TorusProfile torus_profiles(const SurfaceSpec& spec, double spread_tol, Execution exec = Execution::Parallel);

} // namespace curvlab
