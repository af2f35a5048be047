#pragma once

#include <vector>

namespace curvlab {

/// One-dimensional rule: nodes and weights on an interval.
struct Rule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre on [a, b] (Newton iteration on P_n).
Rule1D gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Uniform periodic trapezoid on [0, 2 pi): nodes 2 pi i / n, weights 2 pi / n.
Rule1D periodic_trapezoid(int n);

/// Tensor product of 1D rules; node(i) returns the parameter tuple and the
/// product weight. Index order is row-major with the last direction fastest.
class TensorRule {
public:
    explicit TensorRule(std::vector<Rule1D> directions);

    std::size_t size() const { return size_; }
    int dim() const { return static_cast<int>(directions_.size()); }
    void node(std::size_t index, double* params, double& weight) const;
    const Rule1D& direction(int d) const { return directions_[static_cast<std::size_t>(d)]; }

private:
    std::vector<Rule1D> directions_;
    std::size_t size_ = 1;
};

/// Hyperspherical chart of S^{d}: d-1 polar angles in (0, pi) followed by one
/// azimuth in [0, 2 pi). Writes the unit vector (d+1 entries).
void sphere_point(const double* angles, int d, double* out);

/// Jacobian factor prod_k sin(polar_k)^{d-1-k} of the chart above.
double sphere_jacobian(const double* angles, int d);

/// Gauss-Legendre in each polar angle times trapezoid in the azimuth.
TensorRule sphere_rule(int d, int polar_nodes, int azimuth_nodes);

} // namespace curvlab
