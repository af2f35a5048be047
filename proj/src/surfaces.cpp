#include "curvlab/surfaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>

#include <Eigen/Dense>

#include "curvlab/errors.hpp"
#include "curvlab/quadrature.hpp"

namespace curvlab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kPi = std::numbers::pi;

bool uses_sphere_chart(const SurfaceSpec& spec)
{
    return std::holds_alternative<SliceSpec>(spec.family) || std::holds_alternative<SphereSpec>(spec.family) ||
           std::holds_alternative<EllipsoidSpec>(spec.family) ||
           std::holds_alternative<RadialGraphSpec>(spec.family);
}

bool has_closed_form_curvature(const SurfaceSpec& spec)
{
    return std::holds_alternative<SliceSpec>(spec.family) || std::holds_alternative<SphereSpec>(spec.family) ||
           std::holds_alternative<Torus3Spec>(spec.family);
}

bool has_analytic_area(const SurfaceSpec& spec)
{
    return has_closed_form_curvature(spec) || std::holds_alternative<Torus4Spec>(spec.family);
}

void validate(const SurfaceSpec& spec, const WarpedSpace& space)
{
    const int n = space.dim();
    std::visit(Overloaded{
                   [&](const SliceSpec& s) {
                       if (!(s.r0 > 0.0) || s.r0 >= space.r_max()) {
                           throw ConstructionError("slice radius outside (0, r_max)");
                       }
                   },
                   [&](const SphereSpec& s) {
                       if (!space.is_euclidean()) throw ConstructionError("sphere family requires Euclidean ambient");
                       if (!(s.radius > 0.0)) throw ConstructionError("sphere radius must be positive");
                   },
                   [&](const Torus3Spec& t) {
                       if (!space.is_euclidean() || n != 3) {
                           throw ConstructionError("torus3 requires Euclidean ambient of dimension 3");
                       }
                       if (!(t.r2 > 0.0) || !(t.r2 < t.r1)) throw ConstructionError("torus3 requires 0 < R2 < R1");
                   },
                   [&](const Torus4Spec& t) {
                       if (!space.is_euclidean() || n != 4) {
                           throw ConstructionError("torus4 requires Euclidean ambient of dimension 4");
                       }
                       if (!(t.r2 > 0.0) || !(t.r2 < t.r1)) throw ConstructionError("torus4 requires 0 < R2 < R1");
                   },
                   [&](const EllipsoidSpec& e) {
                       if (!space.is_euclidean()) throw ConstructionError("ellipsoid requires Euclidean ambient");
                       if (static_cast<int>(e.semi_axes.size()) != n) {
                           throw ConstructionError("ellipsoid needs one semi-axis per ambient dimension");
                       }
                       for (double a : e.semi_axes) {
                           if (!(a > 0.0)) throw ConstructionError("ellipsoid semi-axes must be positive");
                       }
                   },
                   [&](const RadialGraphSpec& g) {
                       if (!g.radius) throw ConstructionError("radial graph without a radius function");
                   },
               },
               spec.family);
}

// z = (r, omega) from y = r * omega.
void polar_split(const double* y, int n, double* z)
{
    double r2 = 0.0;
    for (int i = 0; i < n; ++i) r2 += y[i] * y[i];
    const double r = std::sqrt(r2);
    z[0] = r;
    for (int i = 0; i < n; ++i) z[i + 1] = y[i] / r;
}

} // namespace

std::string family_name(const SurfaceSpec& spec)
{
    return std::visit(Overloaded{
                          [](const SliceSpec&) { return std::string("slice"); },
                          [](const SphereSpec&) { return std::string("sphere"); },
                          [](const Torus3Spec&) { return std::string("torus3"); },
                          [](const Torus4Spec&) { return std::string("torus4"); },
                          [](const EllipsoidSpec&) { return std::string("ellipsoid"); },
                          [](const RadialGraphSpec& g) { return g.label; },
                      },
                      spec.family);
}

int family_dimension(const SurfaceSpec& spec)
{
    if (std::holds_alternative<Torus3Spec>(spec.family)) return 3;
    if (std::holds_alternative<Torus4Spec>(spec.family)) return 4;
    if (const auto* e = std::get_if<EllipsoidSpec>(&spec.family)) return static_cast<int>(e->semi_axes.size());
    return 0;
}

bool thinness_flag(const SurfaceSpec& spec)
{
    if (const auto* t = std::get_if<Torus3Spec>(&spec.family)) return t->r2 < t->r1 / 2.0;
    if (const auto* t = std::get_if<Torus4Spec>(&spec.family)) return t->r2 < t->r1 / 3.0;
    return true;
}

double SampleCloud::area() const
{
    std::vector<double> w(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) w[i] = samples[i].weight;
    return pairwise_sum(w);
}

Chart chart_for(const SurfaceSpec& spec, const WarpedSpace& space)
{
    validate(spec, space);
    const int n = space.dim();
    Chart chart;
    chart.ambient_dim = n;
    if (uses_sphere_chart(spec)) {
        chart.param_dim = n - 1;
        const int d = n - 1;
        std::visit(Overloaded{
                       [&](const SliceSpec& s) {
                           const double r0 = s.r0;
                           chart.map = [r0, d](const double* u, double* y) {
                               sphere_point(u, d, y);
                               for (int i = 0; i <= d; ++i) y[i] *= r0;
                           };
                           chart.outward = [n](const double*, const double* y, double* dir) {
                               std::copy(y, y + n, dir);
                           };
                       },
                       [&](const SphereSpec& s) {
                           const double a = s.offset;
                           const double radius = s.radius;
                           chart.map = [a, radius, d](const double* u, double* y) {
                               sphere_point(u, d, y);
                               for (int i = 0; i <= d; ++i) y[i] *= radius;
                               y[d] += a;
                           };
                           chart.outward = [n, a](const double*, const double* y, double* dir) {
                               std::copy(y, y + n, dir);
                               dir[n - 1] -= a;
                           };
                       },
                       [&](const EllipsoidSpec& e) {
                           const auto axes = e.semi_axes;
                           chart.map = [axes, d](const double* u, double* y) {
                               sphere_point(u, d, y);
                               for (int i = 0; i <= d; ++i) y[i] *= axes[i];
                           };
                           chart.outward = [axes, n](const double*, const double* y, double* dir) {
                               for (int i = 0; i < n; ++i) dir[i] = y[i] / (axes[i] * axes[i]);
                           };
                       },
                       [&](const RadialGraphSpec& g) {
                           const auto rho = g.radius;
                           chart.map = [rho, d](const double* u, double* y) {
                               sphere_point(u, d, y);
                               const double radius = rho(std::span<const double>(y, static_cast<std::size_t>(d + 1)));
                               for (int i = 0; i <= d; ++i) y[i] *= radius;
                           };
                           chart.outward = [n](const double*, const double* y, double* dir) {
                               std::copy(y, y + n, dir);
                           };
                       },
                       [](const auto&) {},
                   },
                   spec.family);
    } else if (const auto* t = std::get_if<Torus3Spec>(&spec.family)) {
        chart.param_dim = 2;
        const double r1 = t->r1;
        const double r2 = t->r2;
        // u = (phi, theta)
        chart.map = [r1, r2](const double* u, double* y) {
            const double rho = r1 + r2 * std::cos(u[1]);
            y[0] = rho * std::cos(u[0]);
            y[1] = rho * std::sin(u[0]);
            y[2] = r2 * std::sin(u[1]);
        };
        chart.outward = [r1](const double* u, const double* y, double* dir) {
            dir[0] = y[0] - r1 * std::cos(u[0]);
            dir[1] = y[1] - r1 * std::sin(u[0]);
            dir[2] = y[2];
        };
    } else if (const auto* t4 = std::get_if<Torus4Spec>(&spec.family)) {
        chart.param_dim = 3;
        const double r1 = t4->r1;
        const double r2 = t4->r2;
        // u = (phi, theta, psi); theta is the polar angle on the tube sphere
        // measured from the outward radial direction of the core circle.
        chart.map = [r1, r2](const double* u, double* y) {
            const double rho = r1 + r2 * std::cos(u[1]);
            y[0] = rho * std::cos(u[0]);
            y[1] = rho * std::sin(u[0]);
            y[2] = r2 * std::sin(u[1]) * std::cos(u[2]);
            y[3] = r2 * std::sin(u[1]) * std::sin(u[2]);
        };
        chart.outward = [r1](const double* u, const double* y, double* dir) {
            dir[0] = y[0] - r1 * std::cos(u[0]);
            dir[1] = y[1] - r1 * std::sin(u[0]);
            dir[2] = y[2];
            dir[3] = y[3];
        };
    }
    return chart;
}

PointGeometry immersion_geometry(const Chart& chart, std::span<const double> node, std::span<const double> steps,
                                 const WarpedSpace& space)
{
    const int d = chart.param_dim;
    const int n = chart.ambient_dim;
    const int zdim = n + 1;
    if (static_cast<int>(node.size()) != d || static_cast<int>(steps.size()) != d) {
        throw DomainError("immersion_geometry: node/step dimension mismatch");
    }

    // Differences are taken on the model coordinates y and converted to
    // z = (|y|, y/|y|) by the chain rule; differencing z directly loses the
    // small angular variations near chart poles to rounding in |y|.
    std::vector<double> u(node.begin(), node.end());
    auto eval_y = [&](const std::vector<double>& at) {
        Eigen::VectorXd out(n);
        chart.map(at.data(), out.data());
        return out;
    };
    auto shifted = [&](int a, double sa, int b, double sb) {
        std::vector<double> at = u;
        at[a] += sa;
        if (b >= 0) at[b] += sb;
        return eval_y(at);
    };

    const Eigen::VectorXd y0 = eval_y(u);
    std::vector<double> position(y0.data(), y0.data() + n);

    Eigen::MatrixXd dy(n, d);
    std::vector<Eigen::MatrixXd> ddy(static_cast<std::size_t>(d), Eigen::MatrixXd(n, d));
    for (int a = 0; a < d; ++a) {
        auto first = [&](double s) { return Eigen::VectorXd((shifted(a, s, -1, 0) - shifted(a, -s, -1, 0)) / (2 * s)); };
        auto second = [&](double s) {
            return Eigen::VectorXd((shifted(a, s, -1, 0) - 2.0 * y0 + shifted(a, -s, -1, 0)) / (s * s));
        };
        const double s = steps[a];
        dy.col(a) = (4.0 * first(0.5 * s) - first(s)) / 3.0;
        ddy[a].col(a) = (4.0 * second(0.5 * s) - second(s)) / 3.0;
    }
    for (int a = 0; a < d; ++a) {
        for (int b = a + 1; b < d; ++b) {
            auto mixed = [&](double sa, double sb) {
                return Eigen::VectorXd((shifted(a, sa, b, sb) - shifted(a, sa, b, -sb) - shifted(a, -sa, b, sb) +
                                        shifted(a, -sa, b, -sb)) /
                                       (4 * sa * sb));
            };
            const Eigen::VectorXd m = (4.0 * mixed(0.5 * steps[a], 0.5 * steps[b]) - mixed(steps[a], steps[b])) / 3.0;
            ddy[a].col(b) = m;
            ddy[b].col(a) = m;
        }
    }

    Eigen::VectorXd z0(zdim);
    polar_split(y0.data(), n, z0.data());
    const double ry = z0(0);
    if (!(ry > 0.0)) throw DegenerateError("immersion_geometry: node at r = 0");
    const Eigen::VectorXd om = z0.tail(n);
    Eigen::MatrixXd dz(zdim, d);
    std::vector<Eigen::MatrixXd> ddz(static_cast<std::size_t>(d), Eigen::MatrixXd(zdim, d));
    for (int a = 0; a < d; ++a) {
        dz(0, a) = y0.dot(dy.col(a)) / ry;
        dz.col(a).tail(n) = (dy.col(a) - om * dz(0, a)) / ry;
    }
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            const double drr = (dy.col(a).dot(dy.col(b)) + y0.dot(ddy[a].col(b)) - dz(0, a) * dz(0, b)) / ry;
            ddz[a](0, b) = drr;
            ddz[a].col(b).tail(n) = (ddy[a].col(b) - dz.col(a).tail(n) * dz(0, b) - dz.col(b).tail(n) * dz(0, a) -
                                     om * drr) /
                                    ry;
        }
    }

    const double r = z0(0);
    if (!(r > 0.0)) throw DegenerateError("immersion_geometry: node at r = 0");
    const Warp w = space.warp(r);
    const Eigen::VectorXd omega = z0.tail(n);

    // Tangent vectors in the orthonormal representation (dr, h d omega).
    Eigen::MatrixXd tangents(zdim, d);
    for (int a = 0; a < d; ++a) {
        tangents(0, a) = dz(0, a);
        tangents.col(a).tail(n) = w.h * dz.col(a).tail(n);
    }
    const Eigen::MatrixXd metric = tangents.transpose() * tangents;
    const double det = metric.determinant();
    if (!(det > 1e-300)) throw DegenerateError("immersion_geometry: induced metric is not invertible");

    // Normal: orthogonal complement of the tangents and of the fiber direction omega.
    Eigen::MatrixXd span_mat(zdim, d + 1);
    span_mat.leftCols(d) = tangents;
    span_mat.col(d).setZero();
    span_mat.col(d).tail(n) = omega;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(span_mat);
    Eigen::VectorXd normal = qr.householderQ() * Eigen::VectorXd::Unit(zdim, zdim - 1);
    normal.normalize();

    std::vector<double> hint(static_cast<std::size_t>(n));
    chart.outward(u.data(), position.data(), hint.data());
    Eigen::Map<const Eigen::VectorXd> hint_y(hint.data(), n);
    const double hint_r = omega.dot(hint_y);
    Eigen::VectorXd hint_z(zdim);
    hint_z(0) = hint_r;
    hint_z.tail(n) = w.h * (hint_y - hint_r * omega) / r;
    if (normal.dot(hint_z) < 0.0) normal = -normal;

    // A_ab = -<D_a d_b F, nu> with the warped connection:
    //   radial part  d_ab r - h h' (d_a omega . d_b omega)
    //   fiber part   d_ab omega + (h'/h)(d_a r d_b omega + d_b r d_a omega), scaled by h
    Eigen::MatrixXd second_form(d, d);
    const Eigen::VectorXd nu_fiber = normal.tail(n);
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            const Eigen::VectorXd da_omega = dz.col(a).tail(n);
            const Eigen::VectorXd db_omega = dz.col(b).tail(n);
            const double radial = ddz[a](0, b) - w.h * w.dh * da_omega.dot(db_omega);
            const Eigen::VectorXd fiber = ddz[a].col(b).tail(n) +
                                          (w.dh / w.h) * (dz(0, a) * db_omega + dz(0, b) * da_omega);
            second_form(a, b) = -(radial * normal(0) + w.h * fiber.dot(nu_fiber));
        }
    }
    second_form = 0.5 * (second_form + second_form.transpose()).eval();

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(second_form, metric);
    if (eig.info() != Eigen::Success) throw DegenerateError("immersion_geometry: eigen solver failed");

    PointGeometry out;
    out.r = r;
    out.position = position;
    out.area_element = std::sqrt(det);
    out.normal = normal;
    out.directions = tangents * eig.eigenvectors();
    out.dr_nu = normal(0);
    out.lambdas.resize(static_cast<std::size_t>(d));
    out.dr_e.resize(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        out.lambdas[j] = eig.eigenvalues()(j);
        out.dr_e[j] = out.directions(0, j);
    }
    return out;
}

std::vector<int> expand_resolution(const SurfaceSpec& spec, int ambient_dim)
{
    int dirs = 0;
    std::vector<int> expanded;
    if (uses_sphere_chart(spec)) {
        dirs = ambient_dim - 1;
        if (spec.resolution.size() == 1) {
            expanded.assign(static_cast<std::size_t>(dirs - 1), spec.resolution[0] / 2);
            expanded.push_back(spec.resolution[0]);
        }
    } else if (std::holds_alternative<Torus3Spec>(spec.family)) {
        dirs = 2;
        if (spec.resolution.size() == 1) expanded = {spec.resolution[0], spec.resolution[0]};
    } else {
        dirs = 3;
        if (spec.resolution.size() == 1) {
            expanded = {spec.resolution[0], spec.resolution[0] / 2, spec.resolution[0]};
        }
    }
    if (expanded.empty()) {
        if (static_cast<int>(spec.resolution.size()) != dirs) {
            throw UsageError("resolution needs 1 or " + std::to_string(dirs) + " entries for " + family_name(spec));
        }
        expanded = spec.resolution;
    }
    for (int v : expanded) {
        if (v < 8) throw UsageError("resolution must be >= 8 in every direction");
    }
    return expanded;
}

QuadratureGrid quadrature_grid(const SurfaceSpec& spec, const WarpedSpace& space)
{
    validate(spec, space);
    const int n = space.dim();
    const auto res = expand_resolution(spec, n);
    std::vector<Rule1D> dirs;
    std::vector<double> steps;
    if (uses_sphere_chart(spec)) {
        for (int k = 0; k < n - 2; ++k) {
            dirs.push_back(gauss_legendre(res[k], 0.0, kPi));
            steps.push_back(kPi / res[k] / 8.0);
        }
        dirs.push_back(periodic_trapezoid(res[n - 2]));
        steps.push_back(2 * kPi / res[n - 2] / 8.0);
    } else if (std::holds_alternative<Torus3Spec>(spec.family)) {
        for (int v : res) {
            dirs.push_back(periodic_trapezoid(v));
            steps.push_back(2 * kPi / v / 8.0);
        }
    } else {
        dirs.push_back(periodic_trapezoid(res[0]));
        steps.push_back(2 * kPi / res[0] / 8.0);
        dirs.push_back(gauss_legendre(res[1], 0.0, kPi));
        steps.push_back(kPi / res[1] / 8.0);
        dirs.push_back(periodic_trapezoid(res[2]));
        steps.push_back(2 * kPi / res[2] / 8.0);
    }

    TensorRule rule(std::move(dirs));
    QuadratureGrid grid;
    grid.fd_steps = steps;
    grid.includes_area_element = has_analytic_area(spec) && !spec.force_engine;
    grid.nodes.resize(rule.size());
    const int d = rule.dim();
    for (std::size_t i = 0; i < rule.size(); ++i) {
        auto& node = grid.nodes[i];
        node.params.resize(static_cast<std::size_t>(d));
        rule.node(i, node.params.data(), node.weight);
        const double* u = node.params.data();
        // engine families pick up sqrt(det g) per node instead
        if (!grid.includes_area_element) continue;
        if (uses_sphere_chart(spec)) node.weight *= sphere_jacobian(u, n - 1);
        std::visit(Overloaded{
                       [&](const SliceSpec& s) { node.weight *= std::pow(space.warp(s.r0).h, n - 1); },
                       [&](const SphereSpec& s) { node.weight *= std::pow(s.radius, n - 1); },
                       [&](const Torus3Spec& t) { node.weight *= (t.r1 + t.r2 * std::cos(u[1])) * t.r2; },
                       [&](const Torus4Spec& t) {
                           node.weight *= (t.r1 + t.r2 * std::cos(u[1])) * t.r2 * t.r2 * std::sin(u[1]);
                       },
                       [](const auto&) {},
                   },
                   spec.family);
    }
    return grid;
}

namespace {

SurfaceSample closed_form_sample(const SurfaceSpec& spec, const WarpedSpace& space, const QuadratureNode& node)
{
    const int n = space.dim();
    const int m = n - 1;
    const double* u = node.params.data();
    std::vector<double> omega(static_cast<std::size_t>(n));
    std::vector<double> dr_e(static_cast<std::size_t>(m), 0.0);

    if (const auto* s = std::get_if<SliceSpec>(&spec.family)) {
        sphere_point(u, m, omega.data());
        const Warp w = space.warp(s->r0);
        std::vector<double> pos(omega);
        for (double& v : pos) v *= s->r0;
        return SurfaceSample{s->r0,
                             node.weight,
                             CurvatureVector(std::vector<double>(static_cast<std::size_t>(m), w.dh / w.h)),
                             1.0,
                             dr_e,
                             w.h,
                             std::vector<double>(static_cast<std::size_t>(m), 0.0),
                             pos,
                             node.params};
    }
    if (const auto* s = std::get_if<SphereSpec>(&spec.family)) {
        sphere_point(u, m, omega.data());
        std::vector<double> pos(omega);
        for (double& v : pos) v *= s->radius;
        pos[n - 1] += s->offset;
        double r2 = 0.0;
        double dot = 0.0;
        for (int i = 0; i < n; ++i) {
            r2 += pos[i] * pos[i];
            dot += pos[i] * omega[i];
        }
        const double r = std::sqrt(r2);
        if (!(r > 0.0)) throw DegenerateError("sphere sample at the origin");
        const double dr_nu = dot / r;
        // umbilic: any orthonormal tangent frame is principal; e_1 is the
        // normalized tangential part of d/dr.
        dr_e[0] = std::sqrt(std::max(0.0, 1.0 - dr_nu * dr_nu));
        std::vector<double> xi(dr_e);
        for (double& v : xi) v *= r;
        return SurfaceSample{r,
                             node.weight,
                             CurvatureVector(std::vector<double>(static_cast<std::size_t>(m), 1.0 / s->radius)),
                             dr_nu,
                             dr_e,
                             dot,
                             xi,
                             pos,
                             node.params};
    }
    const auto& t = std::get<Torus3Spec>(spec.family);
    const double phi = u[0];
    const double theta = u[1];
    const double rho = t.r1 + t.r2 * std::cos(theta);
    std::vector<double> pos{rho * std::cos(phi), rho * std::sin(phi), t.r2 * std::sin(theta)};
    const double r = std::sqrt(pos[0] * pos[0] + pos[1] * pos[1] + pos[2] * pos[2]);
    // frame order: (tube direction e_theta, profile direction e_phi)
    dr_e[0] = -t.r1 * std::sin(theta) / r;
    dr_e[1] = 0.0;
    const double dr_nu = (t.r1 * std::cos(theta) + t.r2) / r;
    std::vector<double> xi{r * dr_e[0], 0.0};
    return SurfaceSample{r,
                         node.weight,
                         CurvatureVector{1.0 / t.r2, std::cos(theta) / rho},
                         dr_nu,
                         dr_e,
                         t.r1 * std::cos(theta) + t.r2,
                         xi,
                         pos,
                         node.params};
}

} // namespace

SampleCloud build_surface(const SurfaceSpec& spec, const WarpedSpace& space, Execution exec)
{
    const QuadratureGrid grid = quadrature_grid(spec, space);
    const bool closed = has_closed_form_curvature(spec) && !spec.force_engine;
    const Chart chart = closed ? Chart{} : chart_for(spec, space);

    std::vector<std::optional<SurfaceSample>> slots(grid.nodes.size());
    for_each_index(grid.nodes.size(), exec, [&](std::size_t i) {
        const auto& node = grid.nodes[i];
        if (closed) {
            slots[i] = closed_form_sample(spec, space, node);
            return;
        }
        PointGeometry g = immersion_geometry(chart, node.params, grid.fd_steps, space);
        const double h = space.warp(g.r).h;
        std::vector<double> xi(g.dr_e);
        for (double& v : xi) v *= h;
        const double weight = grid.includes_area_element ? node.weight : node.weight * g.area_element;
        slots[i] = SurfaceSample{g.r,
                                 weight,
                                 CurvatureVector(std::move(g.lambdas)),
                                 g.dr_nu,
                                 std::move(g.dr_e),
                                 h * g.dr_nu,
                                 std::move(xi),
                                 std::move(g.position),
                                 node.params};
    });

    SampleCloud cloud;
    cloud.family = family_name(spec);
    cloud.ambient_dim = space.dim();
    cloud.resolution = expand_resolution(spec, space.dim());
    cloud.engine_derived = !closed;
    cloud.samples.reserve(slots.size());
    for (auto& s : slots) cloud.samples.push_back(std::move(*s));
    return cloud;
}

EllipticPoint elliptic_point_check(const SampleCloud& cloud)
{
    EllipticPoint out;
    if (cloud.samples.empty()) return out;
    std::size_t best = 0;
    for (std::size_t i = 1; i < cloud.samples.size(); ++i) {
        if (cloud.samples[i].r > cloud.samples[best].r) best = i;
    }
    out.witness = best;
    const auto values = cloud.samples[best].lambdas.values();
    out.found = std::all_of(values.begin(), values.end(), [](double v) { return v > 0.0; });
    return out;
}

bool is_umbilic(const SampleCloud& cloud, double tol)
{
    for (const auto& s : cloud.samples) {
        const auto v = s.lambdas.values();
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        if (!(*hi - *lo < tol)) return false;
    }
    return true;
}

namespace {

std::vector<std::vector<std::size_t>> equal_radius_groups(std::span<const double> r, double group_tol)
{
    std::vector<std::size_t> order(r.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return r[a] < r[b]; });
    std::vector<std::vector<std::size_t>> groups;
    if (order.empty()) return groups;
    const double range = r[order.back()] - r[order.front()];
    const double gap = group_tol * std::max(range, std::numeric_limits<double>::min());
    groups.push_back({order[0]});
    for (std::size_t k = 1; k < order.size(); ++k) {
        if (r[order[k]] - r[groups.back().front()] <= gap) {
            groups.back().push_back(order[k]);
        } else {
            groups.push_back({order[k]});
        }
    }
    return groups;
}

} // namespace

RadialDependence radial_dependence(std::span<const double> r, std::span<const double> q, double spread_tol,
                                   double group_tol)
{
    RadialDependence out;
    if (r.size() != q.size() || r.empty()) return out;
    const auto [qlo, qhi] = std::minmax_element(q.begin(), q.end());
    out.range = *qhi - *qlo;
    const auto groups = equal_radius_groups(r, group_tol);
    out.groups = groups.size();
    for (const auto& g : groups) {
        out.largest_group = std::max(out.largest_group, g.size());
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t i : g) {
            lo = std::min(lo, q[i]);
            hi = std::max(hi, q[i]);
        }
        out.max_spread = std::max(out.max_spread, hi - lo);
    }
    out.pass = out.largest_group >= 2 && out.max_spread <= spread_tol * std::max(out.range, 1e-300);
    return out;
}

std::vector<std::pair<double, double>> radial_profile(std::span<const double> r, std::span<const double> q,
                                                      double group_tol)
{
    std::vector<std::pair<double, double>> out;
    for (const auto& g : equal_radius_groups(r, group_tol)) {
        double rs = 0.0;
        double qs = 0.0;
        for (std::size_t i : g) {
            rs += r[i];
            qs += q[i];
        }
        out.emplace_back(rs / g.size(), qs / g.size());
    }
    return out;
}

bool strictly_increasing(const std::vector<std::pair<double, double>>& profile)
{
    if (profile.size() < 2) return false;
    for (std::size_t i = 1; i < profile.size(); ++i) {
        if (!(profile[i].second > profile[i - 1].second)) return false;
    }
    return true;
}

double printed_torus_h1(double r1, double r2, double r)
{
    return (r1 * r1 - r * r) / (r1 * r1 * r1 - r2 * r2 * r1 - r1 * r * r);
}

TorusProfile torus_profiles(const SurfaceSpec& spec, double spread_tol, Execution exec)
{
    const bool three = std::holds_alternative<Torus3Spec>(spec.family);
    if (!three && !std::holds_alternative<Torus4Spec>(spec.family)) {
        throw UsageError("torus_profiles requires a torus3 or torus4 surface");
    }
    const int n = three ? 3 : 4;
    const SampleCloud cloud = build_surface(spec, WarpedSpace::euclidean(n), exec);

    std::vector<double> r(cloud.size());
    std::vector<double> h1(cloud.size());
    std::vector<double> ratio(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto h = normalized_h_all(cloud.samples[i].lambdas);
        r[i] = cloud.samples[i].r;
        h1[i] = h[1];
        ratio[i] = h[2] / h[1];
    }

    TorusProfile out;
    out.family = cloud.family;
    out.thin = thinness_flag(spec);
    out.h1_radial = radial_dependence(r, h1, spread_tol);
    out.ratio_radial = radial_dependence(r, ratio, spread_tol);
    const auto p1 = radial_profile(r, h1);
    const auto p2 = radial_profile(r, ratio);
    out.h1_increasing = strictly_increasing(p1);
    out.ratio_increasing = strictly_increasing(p2);
    out.umbilic = is_umbilic(cloud);
    out.r_min = p1.front().first;
    out.r_max = p1.back().first;
    double r1 = 0.0;
    double r2 = 0.0;
    if (three) {
        r1 = std::get<Torus3Spec>(spec.family).r1;
        r2 = std::get<Torus3Spec>(spec.family).r2;
    }
    for (std::size_t k = 0; k < p1.size(); ++k) {
        out.rows.push_back({p1[k].first, p1[k].second, p2[k].second,
                            three ? printed_torus_h1(r1, r2, p1[k].first) : std::nan("")});
    }
    return out;
}

} // namespace curvlab
