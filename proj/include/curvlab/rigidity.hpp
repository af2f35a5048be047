#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "curvlab/surfaces.hpp"
#include "curvlab/verify.hpp"

namespace curvlab {

struct ConditionResidual {
    double sup = 0.0;
    double normalized_sup = 0.0; ///< sup of the residual divided by the right-hand side
    std::size_t witness = 0;     ///< sample attaining sup
};

/// sup | sum_j (b_j(r) H_j + c_j(r) H_1 H_{j-1}) - eta(r) |. Needs H_k > 0 and
/// eta > 0 on the cloud; throws PreconditionError otherwise.
ConditionResidual radial_condition_residual(const SampleCloud& cloud, const WeightFamily& weights, int k);

/// sup | sum_i a_i(r) H_i - sum_j b_j(r) H_j |, normalized by sum_j b_j H_j.
ConditionResidual ratio_condition_residual(const SampleCloud& cloud, const WeightFamily& weights);

/// sup | H_k / H_l - eta(r) |, normalized by eta.
ConditionResidual ratio_special_residual(const SampleCloud& cloud, int k, int l, const RadialFunction& eta);

/// Radial dependence of H_k / H_l over the cloud.
RadialDependence ratio_radial_dependence(const SampleCloud& cloud, int k, int l, double spread_tol);

struct SolitonTerm {
    int i = 0;
    int j = 1;
    double weight = 1.0;
};

/// Weights a_{i,j} over pairs i < j; constant unless `per_sample` is set, in
/// which case it returns one weight per term for the given sample.
struct SolitonSpec {
    std::vector<SolitonTerm> terms;
    std::function<std::vector<double>(const SurfaceSample&)> per_sample;
    std::optional<double> mu;

    /// max { j : a_{i,j} > 0 }.
    int top_order() const;
    /// Checks non-negativity, i < j <= m and sum = 1 (1e-12) at every sample.
    void validate(const SampleCloud& cloud) const;
    std::vector<double> weights_at(const SurfaceSample& s) const;

    static SolitonSpec single(int i, int j);
    /// Uniform weights over all pairs 0 <= i < j <= m.
    static SolitonSpec uniform(int m);
};

struct SolitonResult {
    double mu = 0.0;
    bool fitted = false;
    double sup_residual = 0.0;
    double integral_residual = 0.0;
    std::size_t witness = 0;
};

/// S = sum a_{i,j} (H_i/H_j)^{1/(j-i)} against mu <X, nu>. When mu is not
/// given it is the least-squares fit (int S p) / (int p^2).
SolitonResult soliton_residual(const SampleCloud& cloud, const SolitonSpec& spec,
                               Execution exec = Execution::Parallel);

struct LedgerEntry {
    std::string name;
    double min_slack = 0.0; ///< relative slack, >= 0 when the inequality holds
    bool applicable = true;
    bool holds = true;
    std::string note;
};

struct ProofLedger {
    int top_order = 0;
    double mu = 0.0;
    std::size_t excluded_samples = 0; ///< samples outside the k-convex cone
    std::vector<LedgerEntry> entries;

    bool all_hold() const;
    const LedgerEntry* find(const std::string& name) const;
};

/// Pointwise bracket inequalities and the integrated comparisons used to pin
/// mu = 1. Pointwise checks run on the samples with H_1..H_k > 0; integrated
/// comparisons are marked applicable only when the soliton residual is below
/// `soliton_tol` (relative to sup p).
ProofLedger soliton_proof_chain(const SampleCloud& cloud, const SolitonSpec& spec, double slack_tol = 1e-12,
                                double soliton_tol = 1e-8, Execution exec = Execution::Parallel);

/// Closed non-umbilical surface whose H_1 is radial and increasing in r.
struct CounterexampleWitness {
    bool thin = false;
    bool radial = false;
    bool increasing = false;
    bool non_umbilic = false;

    bool demonstrated() const { return radial && increasing && non_umbilic; }
};

CounterexampleWitness counterexample_witness(const TorusProfile& profile);

/// H_1 of the R^3 torus as a function of r, from its closed-form geometry.
RadialFunction torus3_h1_profile(double r1, double r2);

} // namespace curvlab
