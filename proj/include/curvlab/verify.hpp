#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "curvlab/ambient.hpp"
#include "curvlab/parallel.hpp"
#include "curvlab/surfaces.hpp"

namespace curvlab {

enum class Monotonicity { Increasing, Decreasing, None };

const char* to_string(Monotonicity m);

/// A function of the ambient radius with derivative access.
struct RadialFunction {
    std::string name;
    std::function<double(double)> value;
    std::function<double(double)> derivative;
    Monotonicity declared = Monotonicity::None;

    double operator()(double r) const { return value(r); }

    static RadialFunction constant(double c, std::string name = "");
    /// c * r^p
    static RadialFunction power(double c, int p, std::string name = "");
};

struct MonotonicityCheck {
    bool consistent = true;
    double worst_violation = 0.0; ///< most negative signed step against the declared direction
};

/// Samples consecutive differences on `grid`; None is always consistent.
MonotonicityCheck validate_monotonicity(const RadialFunction& fn, std::span<const double> grid, double tol = 1e-12);

/// Coefficient functions for the rigidity hypotheses. b, c, a are keyed by
/// their curvature order.
struct WeightFamily {
    std::map<int, RadialFunction> b;
    std::map<int, RadialFunction> c;
    std::map<int, RadialFunction> a;
    std::optional<RadialFunction> eta;
    std::optional<RadialFunction> phi;

    /// name -> check for every declared function.
    std::map<std::string, MonotonicityCheck> validate(std::span<const double> grid) const;
};

struct ConvergenceEstimate {
    double order = 0.0;
    bool saturated = false; ///< both errors at round-off level; no order measurable

    /// order >= min_order, or saturated.
    bool at_least(double min_order) const { return saturated || order >= min_order; }
};

/// log2(coarse/fine) for a grid doubling. Errors at or below `floor` on the
/// coarse grid count as saturated.
ConvergenceEstimate convergence_order(double coarse_error, double fine_error, double floor = 1e-13);

struct IdentityResidual {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0; ///< lhs - rhs
    double relative = 0.0; ///< |residual| / max(|lhs|, |rhs|, area)
    double area = 0.0;
    std::vector<int> resolution;
    std::optional<ConvergenceEstimate> convergence;
};

IdentityResidual make_residual(double lhs, double rhs, double area, std::vector<int> resolution);

/// Sum over samples of weight * integrand(sample); evaluation runs under
/// `exec`, the reduction is pairwise in index order.
double integrate(const SampleCloud& cloud, const std::function<double(const SurfaceSample&)>& integrand,
                 Execution exec = Execution::Parallel);

/// int H_j = int H_{j+1} p, Euclidean ambient, 0 <= j <= n-2.
IdentityResidual classical_hm_residual(const SampleCloud& cloud, const WarpedSpace& space, int j,
                                       Execution exec = Execution::Parallel);

/// Pointwise (div T_{k-1})(xi) from the Ricci structure of the warped metric:
///   C(n-3, k-2) beta(r) h(r) dr_nu sum_j H_{k-2;j} dr_e[j]^2, zero for k = 1.
double div_newton_term(const SurfaceSample& sample, const WarpedSpace& space, int k);

/// Weighted Minkowski identity for 1 <= k <= n-1 and radial weight phi.
IdentityResidual weighted_hm_residual(const SampleCloud& cloud, const WarpedSpace& space, int k,
                                      const RadialFunction& phi, Execution exec = Execution::Parallel);

struct DivergenceCheck {
    double value = 0.0;     ///< integral of the four-term divergence expression
    double scaled = 0.0;    ///< value / (k C(n-1,k)), comparable with lhs - rhs
    double relative = 0.0;  ///< |scaled| / max(|lhs|, |rhs|, area)
    double agreement = 0.0; ///< |scaled - (lhs - rhs)| / max(|lhs|, |rhs|, area)
    IdentityResidual weighted;
};

DivergenceCheck divergence_theorem_check(const SampleCloud& cloud, const WarpedSpace& space, int k,
                                         const RadialFunction& phi, Execution exec = Execution::Parallel);

enum class CheckStatus { Pass, Fail, Skipped };

const char* to_string(CheckStatus s);

struct SignCheck {
    CheckStatus status = CheckStatus::Skipped;
    double min_margin = 0.0;
    std::string reason;
};

/// -xi^j Ric(e_j, nu) = beta h dr_nu dr_e[j]^2 >= -tol at every sample and j.
/// Skipped (not failed) when the cloud is not strictly star-shaped or the
/// (H4) quantity is negative on the sampled radii.
SignCheck xi_ric_sign_check(const SampleCloud& cloud, const WarpedSpace& space, double tol = 1e-12);

struct BrendleGap {
    double f_over_h1 = 0.0;
    double support = 0.0;
    double gap = 0.0;
    double area = 0.0;
    bool near_equality = false;
};

/// int f/H_1 - int <X, nu>. Requires H_1 > 0 at every sample, an embedded
/// cloud, and an ambient passing (H1)-(H3) or a catalog space form.
BrendleGap brendle_gap(const SampleCloud& cloud, const WarpedSpace& space, double tol = 1e-8,
                       Execution exec = Execution::Parallel);

} // namespace curvlab
