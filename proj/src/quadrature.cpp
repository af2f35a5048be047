#include "curvlab/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "curvlab/errors.hpp"

namespace curvlab {

Rule1D gauss_legendre(int n, double a, double b)
{
    if (n < 1) throw DomainError("gauss_legendre: need at least one node");
    Rule1D rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // one more derivative evaluation at the converged root
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = mid - half * x;
        rule.nodes[n - 1 - i] = mid + half * x;
        rule.weights[i] = half * w;
        rule.weights[n - 1 - i] = half * w;
    }
    return rule;
}

Rule1D periodic_trapezoid(int n)
{
    if (n < 1) throw DomainError("periodic_trapezoid: need at least one node");
    Rule1D rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.assign(static_cast<std::size_t>(n), 2.0 * std::numbers::pi / n);
    for (int i = 0; i < n; ++i) rule.nodes[i] = 2.0 * std::numbers::pi * i / n;
    return rule;
}

TensorRule::TensorRule(std::vector<Rule1D> directions) : directions_(std::move(directions))
{
    for (const auto& d : directions_) size_ *= d.nodes.size();
}

void TensorRule::node(std::size_t index, double* params, double& weight) const
{
    weight = 1.0;
    for (int d = dim() - 1; d >= 0; --d) {
        const auto& rule = directions_[static_cast<std::size_t>(d)];
        const std::size_t len = rule.nodes.size();
        const std::size_t i = index % len;
        index /= len;
        params[d] = rule.nodes[i];
        weight *= rule.weights[i];
    }
}

void sphere_point(const double* angles, int d, double* out)
{
    double prefix = 1.0;
    for (int k = 0; k < d - 1; ++k) {
        out[k] = prefix * std::cos(angles[k]);
        prefix *= std::sin(angles[k]);
    }
    out[d - 1] = prefix * std::cos(angles[d - 1]);
    out[d] = prefix * std::sin(angles[d - 1]);
}

double sphere_jacobian(const double* angles, int d)
{
    double jac = 1.0;
    for (int k = 0; k < d - 1; ++k) jac *= std::pow(std::sin(angles[k]), d - 1 - k);
    return jac;
}

TensorRule sphere_rule(int d, int polar_nodes, int azimuth_nodes)
{
    if (d < 1) throw DomainError("sphere_rule: dimension must be >= 1");
    std::vector<Rule1D> dirs;
    for (int k = 0; k < d - 1; ++k) dirs.push_back(gauss_legendre(polar_nodes, 0.0, std::numbers::pi));
    dirs.push_back(periodic_trapezoid(azimuth_nodes));
    return TensorRule(std::move(dirs));
}

} // namespace curvlab
