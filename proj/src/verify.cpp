#include "curvlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curvlab/errors.hpp"

namespace curvlab {

const char* to_string(Monotonicity m)
{
    switch (m) {
    case Monotonicity::Increasing: return "increasing";
    case Monotonicity::Decreasing: return "decreasing";
    case Monotonicity::None: return "none";
    }
    return "none";
}

const char* to_string(CheckStatus s)
{
    switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
    }
    return "skipped";
}

RadialFunction RadialFunction::constant(double c, std::string name)
{
    if (name.empty()) name = std::to_string(c);
    return {std::move(name), [c](double) { return c; }, [](double) { return 0.0; }, Monotonicity::None};
}

RadialFunction RadialFunction::power(double c, int p, std::string name)
{
    if (name.empty()) name = std::to_string(c) + "*r^" + std::to_string(p);
    Monotonicity mono = Monotonicity::None;
    if (p > 0 && c > 0) mono = Monotonicity::Increasing;
    if (p > 0 && c < 0) mono = Monotonicity::Decreasing;
    return {std::move(name), [c, p](double r) { return c * std::pow(r, p); },
            [c, p](double r) { return p == 0 ? 0.0 : c * p * std::pow(r, p - 1); }, mono};
}

MonotonicityCheck validate_monotonicity(const RadialFunction& fn, std::span<const double> grid, double tol)
{
    MonotonicityCheck out;
    if (fn.declared == Monotonicity::None || grid.size() < 2) return out;
    const double sign = fn.declared == Monotonicity::Increasing ? 1.0 : -1.0;
    double prev = fn(grid[0]);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double cur = fn(grid[i]);
        const double step = sign * (cur - prev);
        out.worst_violation = std::min(out.worst_violation, step);
        prev = cur;
    }
    out.consistent = out.worst_violation >= -tol;
    return out;
}

std::map<std::string, MonotonicityCheck> WeightFamily::validate(std::span<const double> grid) const
{
    std::map<std::string, MonotonicityCheck> out;
    auto add = [&](const std::string& key, const RadialFunction& fn) { out[key] = validate_monotonicity(fn, grid); };
    for (const auto& [j, fn] : b) add("b" + std::to_string(j), fn);
    for (const auto& [j, fn] : c) add("c" + std::to_string(j), fn);
    for (const auto& [i, fn] : a) add("a" + std::to_string(i), fn);
    if (eta) add("eta", *eta);
    if (phi) add("phi", *phi);
    return out;
}

ConvergenceEstimate convergence_order(double coarse_error, double fine_error, double floor)
{
    ConvergenceEstimate est;
    coarse_error = std::abs(coarse_error);
    fine_error = std::abs(fine_error);
    if (coarse_error <= floor) {
        est.saturated = true;
        est.order = std::numeric_limits<double>::infinity();
        return est;
    }
    est.order = fine_error == 0.0 ? std::numeric_limits<double>::infinity() : std::log2(coarse_error / fine_error);
    return est;
}

IdentityResidual make_residual(double lhs, double rhs, double area, std::vector<int> resolution)
{
    IdentityResidual out;
    out.lhs = lhs;
    out.rhs = rhs;
    out.residual = lhs - rhs;
    out.area = area;
    out.relative = std::abs(out.residual) / std::max({std::abs(lhs), std::abs(rhs), area});
    out.resolution = std::move(resolution);
    return out;
}

double integrate(const SampleCloud& cloud, const std::function<double(const SurfaceSample&)>& integrand,
                 Execution exec)
{
    std::vector<double> terms(cloud.size());
    for_each_index(cloud.size(), exec, [&](std::size_t i) {
        const auto& s = cloud.samples[i];
        terms[i] = s.weight * integrand(s);
    });
    return pairwise_sum(terms);
}

IdentityResidual classical_hm_residual(const SampleCloud& cloud, const WarpedSpace& space, int j, Execution exec)
{
    if (!space.is_euclidean()) throw PreconditionError("classical Minkowski formula needs a Euclidean ambient");
    const int n = space.dim();
    if (j < 0 || j > n - 2) throw DomainError("classical_hm_residual: order outside [0, n-2]");
    const double lhs = integrate(cloud, [j](const SurfaceSample& s) { return normalized_h(j, s.lambdas); }, exec);
    const double rhs = integrate(
        cloud, [j](const SurfaceSample& s) { return normalized_h(j + 1, s.lambdas) * s.support; }, exec);
    return make_residual(lhs, rhs, cloud.area(), cloud.resolution);
}

double div_newton_term(const SurfaceSample& sample, const WarpedSpace& space, int k)
{
    if (k < 2) return 0.0;
    const int n = space.dim();
    const double beta = ricci_coeffs(space, sample.r).beta;
    if (beta == 0.0) return 0.0;
    const double h = space.warp(sample.r).h;
    double acc = 0.0;
    for (int j = 0; j < sample.lambdas.dim(); ++j) {
        acc += restricted_h(k - 2, j, sample.lambdas) * sample.dr_e[j] * sample.dr_e[j];
    }
    return static_cast<double>(binomial(n - 3, k - 2)) * beta * h * sample.dr_nu * acc;
}

namespace {

void require_weighted_order(const WarpedSpace& space, int k)
{
    if (k < 1 || k > space.dim() - 1) throw DomainError("weighted Minkowski formula: order outside [1, n-1]");
}

// <T_{k-1} grad r, grad r> = sum_j Lambda_j dr_e[j]^2
double newton_quadratic(const SurfaceSample& s, int k)
{
    const auto spec = newton_spectrum(k - 1, s.lambdas);
    double acc = 0.0;
    for (int j = 0; j < s.lambdas.dim(); ++j) acc += spec.eigenvalues[j] * s.dr_e[j] * s.dr_e[j];
    return acc;
}

} // namespace

IdentityResidual weighted_hm_residual(const SampleCloud& cloud, const WarpedSpace& space, int k,
                                      const RadialFunction& phi, Execution exec)
{
    require_weighted_order(space, k);
    const int n = space.dim();
    const double scale = 1.0 / (k * static_cast<double>(binomial(n - 1, k)));

    const double minkowski = integrate(
        cloud,
        [&](const SurfaceSample& s) {
            const auto h = normalized_h_all(s.lambdas);
            const double f = potential(space, s.r);
            return phi(s.r) * (f * h[k - 1] - h[k] * s.support);
        },
        exec);
    const double div_part = integrate(
        cloud, [&](const SurfaceSample& s) { return phi(s.r) * div_newton_term(s, space, k); }, exec);
    const double gradient = integrate(
        cloud,
        [&](const SurfaceSample& s) {
            return space.warp(s.r).h * phi.derivative(s.r) * newton_quadratic(s, k);
        },
        exec);

    return make_residual(minkowski + scale * div_part, -scale * gradient, cloud.area(), cloud.resolution);
}

DivergenceCheck divergence_theorem_check(const SampleCloud& cloud, const WarpedSpace& space, int k,
                                         const RadialFunction& phi, Execution exec)
{
    require_weighted_order(space, k);
    const int n = space.dim();
    const double scale = 1.0 / (k * static_cast<double>(binomial(n - 1, k)));

    DivergenceCheck out;
    out.weighted = weighted_hm_residual(cloud, space, k, phi, exec);
    out.value = integrate(
        cloud,
        [&](const SurfaceSample& s) {
            const auto sig = elementary_symmetric(s.lambdas.values(), k);
            const double w = space.warp(s.r).h;
            const double f = potential(space, s.r);
            const double ph = phi(s.r);
            return (n - k) * f * sig[k - 1] * ph - k * sig[k] * ph * s.support +
                   ph * div_newton_term(s, space, k) + w * phi.derivative(s.r) * newton_quadratic(s, k);
        },
        exec);
    out.scaled = scale * out.value;
    const double denom = std::max({std::abs(out.weighted.lhs), std::abs(out.weighted.rhs), out.weighted.area});
    out.relative = std::abs(out.scaled) / denom;
    out.agreement = std::abs(out.scaled - out.weighted.residual) / denom;
    return out;
}

SignCheck xi_ric_sign_check(const SampleCloud& cloud, const WarpedSpace& space, double tol)
{
    SignCheck out;
    double min_margin = std::numeric_limits<double>::infinity();
    bool star = true;
    bool h4 = true;
    for (const auto& s : cloud.samples) {
        star = star && s.dr_nu > 0.0;
        h4 = h4 && h4_quantity(space, s.r) >= -tol;
        const double beta = ricci_coeffs(space, s.r).beta;
        const double h = space.warp(s.r).h;
        for (double e : s.dr_e) min_margin = std::min(min_margin, beta * h * s.dr_nu * e * e);
    }
    out.min_margin = min_margin;
    if (!star) {
        out.reason = "cloud is not strictly star-shaped";
        return out;
    }
    if (!h4) {
        out.reason = "(H4) quantity negative on the sampled radii";
        return out;
    }
    out.status = min_margin >= -tol ? CheckStatus::Pass : CheckStatus::Fail;
    return out;
}

BrendleGap brendle_gap(const SampleCloud& cloud, const WarpedSpace& space, double tol, Execution exec)
{
    if (!cloud.embedded) throw PreconditionError("brendle_gap: cloud is not known to be embedded");
    if (!space.is_space_form()) {
        double r_hi = 0.0;
        for (const auto& s : cloud.samples) r_hi = std::max(r_hi, s.r);
        const auto grid = radial_grid(space, 200, 1e-3, std::min(space.r_max(), 1.05 * r_hi));
        const auto cond = check_conditions(space, grid);
        if (!(cond.h1.pass && cond.h2.pass && cond.h3.pass)) {
            throw PreconditionError("brendle_gap: ambient fails (H1)-(H3)");
        }
    }
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        if (!(normalized_h(1, cloud.samples[i].lambdas) > 0.0)) {
            throw PreconditionError("brendle_gap: H_1 <= 0 at sample " + std::to_string(i));
        }
    }
    BrendleGap out;
    out.f_over_h1 = integrate(
        cloud, [&](const SurfaceSample& s) { return potential(space, s.r) / normalized_h(1, s.lambdas); }, exec);
    out.support = integrate(cloud, [](const SurfaceSample& s) { return s.support; }, exec);
    out.gap = out.f_over_h1 - out.support;
    out.area = cloud.area();
    out.near_equality = std::abs(out.gap) < tol * out.area;
    return out;
}

} // namespace curvlab
