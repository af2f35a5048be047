#include "curvlab/rigidity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curvlab/errors.hpp"

namespace curvlab {

namespace {

void require_k_convex(const SampleCloud& cloud, int k)
{
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        if (!(normalized_h(k, cloud.samples[i].lambdas) > 0.0)) {
            throw PreconditionError("H_" + std::to_string(k) + " <= 0 at sample " + std::to_string(i));
        }
    }
}

void track_sup(ConditionResidual& out, std::size_t i, double residual, double reference)
{
    const double abs_res = std::abs(residual);
    if (abs_res > out.sup || (i == 0 && out.sup == 0.0)) {
        if (abs_res >= out.sup) out.witness = i;
        out.sup = std::max(out.sup, abs_res);
    }
    out.normalized_sup = std::max(out.normalized_sup, abs_res / std::abs(reference));
}

double relative_slack(double smaller, double larger)
{
    const double scale = std::max({std::abs(smaller), std::abs(larger), std::numeric_limits<double>::min()});
    return (larger - smaller) / scale;
}

} // namespace

ConditionResidual radial_condition_residual(const SampleCloud& cloud, const WeightFamily& weights, int k)
{
    if (!weights.eta) throw UsageError("radial_condition_residual: eta is required");
    if (cloud.samples.empty()) throw UsageError("radial_condition_residual: empty cloud");
    const int m = cloud.samples.front().lambdas.dim();
    if (k < 1 || k > m) throw DomainError("radial_condition_residual: order outside [1, n-1]");
    require_k_convex(cloud, k);

    ConditionResidual out;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto& s = cloud.samples[i];
        const double eta = (*weights.eta)(s.r);
        if (!(eta > 0.0)) throw PreconditionError("eta <= 0 at sample " + std::to_string(i));
        const auto h = normalized_h_all(s.lambdas);
        double lhs = 0.0;
        for (int j = 1; j <= k; ++j) {
            if (auto it = weights.b.find(j); it != weights.b.end()) lhs += it->second(s.r) * h[j];
            if (auto it = weights.c.find(j); it != weights.c.end()) lhs += it->second(s.r) * h[1] * h[j - 1];
        }
        track_sup(out, i, lhs - eta, eta);
    }
    return out;
}

ConditionResidual ratio_condition_residual(const SampleCloud& cloud, const WeightFamily& weights)
{
    if (weights.a.empty() || weights.b.empty()) throw UsageError("ratio_condition_residual: needs a_i and b_j");
    if (weights.a.rbegin()->first >= weights.b.begin()->first) {
        throw UsageError("ratio_condition_residual: a indices must precede b indices");
    }
    const int k = weights.b.rbegin()->first;
    require_k_convex(cloud, k);

    ConditionResidual out;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto& s = cloud.samples[i];
        const auto h = normalized_h_all(s.lambdas);
        double left = 0.0;
        double right = 0.0;
        for (const auto& [idx, fn] : weights.a) left += fn(s.r) * h[idx];
        for (const auto& [idx, fn] : weights.b) right += fn(s.r) * h[idx];
        track_sup(out, i, left - right, right);
    }
    return out;
}

ConditionResidual ratio_special_residual(const SampleCloud& cloud, int k, int l, const RadialFunction& eta)
{
    if (!(l < k)) throw DomainError("ratio_special_residual: need l < k");
    require_k_convex(cloud, k);
    ConditionResidual out;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto& s = cloud.samples[i];
        const double e = eta(s.r);
        track_sup(out, i, normalized_h(k, s.lambdas) / normalized_h(l, s.lambdas) - e, e);
    }
    return out;
}

RadialDependence ratio_radial_dependence(const SampleCloud& cloud, int k, int l, double spread_tol)
{
    std::vector<double> r(cloud.size());
    std::vector<double> q(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        r[i] = cloud.samples[i].r;
        q[i] = normalized_h(k, cloud.samples[i].lambdas) / normalized_h(l, cloud.samples[i].lambdas);
    }
    return radial_dependence(r, q, spread_tol);
}

int SolitonSpec::top_order() const
{
    int k = 0;
    for (const auto& t : terms) {
        if (t.weight > 0.0 || per_sample) k = std::max(k, t.j);
    }
    return k;
}

std::vector<double> SolitonSpec::weights_at(const SurfaceSample& s) const
{
    if (per_sample) return per_sample(s);
    std::vector<double> w;
    w.reserve(terms.size());
    for (const auto& t : terms) w.push_back(t.weight);
    return w;
}

void SolitonSpec::validate(const SampleCloud& cloud) const
{
    if (terms.empty()) throw UsageError("soliton spec has no terms");
    const int m = cloud.samples.empty() ? 0 : cloud.samples.front().lambdas.dim();
    for (const auto& t : terms) {
        if (t.i < 0 || t.i >= t.j || t.j > m) {
            throw UsageError("soliton pair (" + std::to_string(t.i) + "," + std::to_string(t.j) +
                             ") outside 0 <= i < j <= n-1");
        }
    }
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto w = weights_at(cloud.samples[i]);
        if (w.size() != terms.size()) throw UsageError("soliton weights do not match the term list");
        double total = 0.0;
        for (double v : w) {
            if (v < 0.0) throw UsageError("soliton weights must be non-negative");
            total += v;
        }
        if (std::abs(total - 1.0) > 1e-12) {
            throw UsageError("soliton weights sum to " + std::to_string(total) + " at sample " + std::to_string(i));
        }
        if (!per_sample) break;
    }
    if (mu && !(*mu > 0.0)) throw UsageError("soliton mu must be positive");
}

SolitonSpec SolitonSpec::single(int i, int j)
{
    SolitonSpec spec;
    spec.terms.push_back({i, j, 1.0});
    return spec;
}

SolitonSpec SolitonSpec::uniform(int m)
{
    SolitonSpec spec;
    const int pairs = m * (m + 1) / 2;
    for (int i = 0; i <= m; ++i) {
        for (int j = i + 1; j <= m; ++j) spec.terms.push_back({i, j, 1.0 / pairs});
    }
    return spec;
}

namespace {

double soliton_speed(const SolitonSpec& spec, const SurfaceSample& s, const std::vector<double>& h)
{
    const auto w = spec.weights_at(s);
    double speed = 0.0;
    for (std::size_t t = 0; t < spec.terms.size(); ++t) {
        const auto& term = spec.terms[t];
        if (w[t] == 0.0) continue;
        speed += w[t] * std::pow(h[term.i] / h[term.j], 1.0 / (term.j - term.i));
    }
    return speed;
}

bool convex_up_to(const std::vector<double>& h, int k)
{
    for (int q = 1; q <= k; ++q) {
        if (!(h[q] > 0.0)) return false;
    }
    return true;
}

} // namespace

SolitonResult soliton_residual(const SampleCloud& cloud, const SolitonSpec& spec, Execution exec)
{
    spec.validate(cloud);
    const int k = spec.top_order();
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        if (!convex_up_to(normalized_h_all(cloud.samples[i].lambdas), k)) {
            throw PreconditionError("soliton hypothesis violated: H_q <= 0 for some q <= " + std::to_string(k) +
                                    " at sample " + std::to_string(i));
        }
    }
    std::vector<double> speed(cloud.size());
    for_each_index(cloud.size(), exec, [&](std::size_t i) {
        speed[i] = soliton_speed(spec, cloud.samples[i], normalized_h_all(cloud.samples[i].lambdas));
    });

    SolitonResult out;
    if (spec.mu) {
        out.mu = *spec.mu;
    } else {
        std::vector<double> sp(cloud.size());
        std::vector<double> pp(cloud.size());
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            const auto& s = cloud.samples[i];
            sp[i] = s.weight * speed[i] * s.support;
            pp[i] = s.weight * s.support * s.support;
        }
        out.mu = pairwise_sum(sp) / pairwise_sum(pp);
        out.fitted = true;
    }
    std::vector<double> abs_terms(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto& s = cloud.samples[i];
        const double res = std::abs(speed[i] - out.mu * s.support);
        abs_terms[i] = s.weight * res;
        if (res > out.sup_residual) {
            out.sup_residual = res;
            out.witness = i;
        }
    }
    out.integral_residual = pairwise_sum(abs_terms);
    return out;
}

bool ProofLedger::all_hold() const
{
    return std::all_of(entries.begin(), entries.end(), [](const LedgerEntry& e) { return !e.applicable || e.holds; });
}

const LedgerEntry* ProofLedger::find(const std::string& name) const
{
    for (const auto& e : entries) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

ProofLedger soliton_proof_chain(const SampleCloud& cloud, const SolitonSpec& spec, double slack_tol,
                                double soliton_tol, Execution exec)
{
    spec.validate(cloud);
    ProofLedger ledger;
    const int k = spec.top_order();
    ledger.top_order = k;
    const int m = cloud.samples.empty() ? 0 : cloud.samples.front().lambdas.dim();

    double upper = std::numeric_limits<double>::infinity();
    double lower = upper;
    double chain = upper;
    double maclaurin_k1 = upper;
    std::vector<char> inside(cloud.size(), 0);
    for (std::size_t s_idx = 0; s_idx < cloud.size(); ++s_idx) {
        const auto& s = cloud.samples[s_idx];
        const auto h = normalized_h_all(s.lambdas);
        if (!convex_up_to(h, k)) continue;
        inside[s_idx] = 1;
        const auto w = spec.weights_at(s);
        double weighted_ratio = 0.0;
        for (std::size_t t = 0; t < spec.terms.size(); ++t) {
            const auto& term = spec.terms[t];
            const double root = std::pow(h[term.i] / h[term.j], 1.0 / (term.j - term.i));
            if (w[t] > 0.0) {
                upper = std::min(upper, relative_slack(root, h[term.j - 1] / h[term.j]));
                lower = std::min(lower, relative_slack(h[0] / h[1], root));
            }
            weighted_ratio += w[t] * h[term.j - 1] / h[term.j];
        }
        chain = std::min(chain, relative_slack(weighted_ratio, h[k - 1] / h[k]));
        if (k == 1 && m >= 2) maclaurin_k1 = std::min(maclaurin_k1, relative_slack(h[2] / h[1], h[1]));
    }
    for (char c : inside) ledger.excluded_samples += c ? 0 : 1;

    auto add = [&](std::string name, double slack, bool applicable, std::string note) {
        LedgerEntry e{std::move(name), slack, applicable, slack >= -slack_tol, std::move(note)};
        if (!std::isfinite(slack)) {
            e.applicable = false;
            e.min_slack = 0.0;
            e.holds = true;
            e.note += " (no sample inside the cone)";
        }
        ledger.entries.push_back(std::move(e));
    };
    add("bracket_upper", upper, true, "(H_i/H_j)^{1/(j-i)} <= H_{j-1}/H_j for active pairs");
    add("bracket_lower", lower, true, "(H_i/H_j)^{1/(j-i)} >= H_0/H_1 for active pairs");
    add("chain_upper", chain, true, "sum a_ij H_{j-1}/H_j <= H_{k-1}/H_k");
    if (k == 1) add("newton3_pointwise", maclaurin_k1, true, "H_2/H_1 <= H_1/H_0");

    // Integrated comparisons only make sense on an exact soliton.
    bool exact = false;
    if (ledger.excluded_samples == 0) {
        const SolitonResult res = soliton_residual(cloud, spec, exec);
        ledger.mu = res.mu;
        double p_max = 0.0;
        for (const auto& s : cloud.samples) p_max = std::max(p_max, std::abs(s.support));
        exact = res.sup_residual <= soliton_tol * std::max(p_max, 1.0);
    }
    const double mu = ledger.mu;
    auto integral = [&](auto fn) { return integrate(cloud, fn, exec); };
    const double hk_p = integral([k](const SurfaceSample& s) { return normalized_h(k, s.lambdas) * s.support; });
    const double hk1 = integral([k](const SurfaceSample& s) { return normalized_h(k - 1, s.lambdas); });
    const double h1_p = integral([](const SurfaceSample& s) { return normalized_h(1, s.lambdas) * s.support; });
    const double h0 = cloud.area();
    const std::string why = exact ? "" : " (not an exact soliton)";
    add("integrated_upper", relative_slack(mu * hk_p, hk1), exact, "mu int H_k p <= int H_{k-1}" + why);
    add("integrated_lower", relative_slack(h0, mu * h1_p), exact, "mu int H_1 p >= int H_0" + why);
    if (k == 1 && m >= 2) {
        const double h2_p = integral([](const SurfaceSample& s) { return normalized_h(2, s.lambdas) * s.support; });
        const double h1 = integral([](const SurfaceSample& s) { return normalized_h(1, s.lambdas); });
        add("newton3_integrated", relative_slack(h2_p, h1), exact, "int H_2 p <= int H_1" + why);
    }
    return ledger;
}

CounterexampleWitness counterexample_witness(const TorusProfile& profile)
{
    CounterexampleWitness w;
    w.thin = profile.thin;
    w.radial = profile.h1_radial.pass;
    w.increasing = profile.h1_increasing;
    w.non_umbilic = !profile.umbilic;
    return w;
}

RadialFunction torus3_h1_profile(double r1, double r2)
{
    auto rho_of = [r1, r2](double r) {
        const double c = (r * r - r1 * r1 - r2 * r2) / (2 * r1 * r2);
        return std::pair{c, r1 + r2 * c};
    };
    return {"torus3_h1(" + std::to_string(r1) + "," + std::to_string(r2) + ")",
            [=](double r) {
                const auto [c, rho] = rho_of(r);
                return 0.5 * (1.0 / r2 + c / rho);
            },
            [=](double r) {
                const auto [c, rho] = rho_of(r);
                return r / (2 * r2 * rho * rho);
            },
            Monotonicity::Increasing};
}

} // namespace curvlab
