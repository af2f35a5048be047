#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace curvlab {

/// Principal curvatures at one point of a hypersurface, m = n - 1 entries.
/// Every function in this header is symmetric under permutation of the entries.
class CurvatureVector {
public:
    explicit CurvatureVector(std::vector<double> values);
    CurvatureVector(std::initializer_list<double> values);

    int dim() const { return static_cast<int>(values_.size()); }
    std::span<const double> values() const { return values_; }
    double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }

    /// The same vector with entry `j` (0-based) removed. May have dimension 1.
    std::vector<double> without(int j) const;

private:
    std::vector<double> values_;
};

/// Eigenvalues of the k-th Newton transformation in the principal frame.
struct NewtonSpectrum {
    int order = 0;
    std::vector<double> eigenvalues;
};

/// Exact binomial coefficient; throws on overflow or negative arguments.
long long binomial(int n, int k);

/// σ_0..σ_kmax of an arbitrary list via the incremental recurrence.
std::vector<double> elementary_symmetric(std::span<const double> values, int kmax);

double sigma(int k, const CurvatureVector& lambdas);
double normalized_h(int k, const CurvatureVector& lambdas);

/// All normalized mean curvatures H_0..H_m in one pass.
std::vector<double> normalized_h_all(const CurvatureVector& lambdas);

/// H_k of the vector with entry `j` (0-based) omitted, normalized by C(m-1, k).
double restricted_h(int k, int j, const CurvatureVector& lambdas);

NewtonSpectrum newton_spectrum(int k, const CurvatureVector& lambdas);

/// Literal evaluation of the generalized-Kronecker-delta expression
///   (T_k)^i_j = 1/k! sum delta^{i i1..ik}_{j j1..jk} A^{j1}_{i1} ... A^{jk}_{ik}
/// Only the non-vanishing delta terms are visited (lower index tuples that are
/// permutations of the upper tuple). Exponential cost; refuses m > 6.
Eigen::MatrixXd newton_matrix_oracle(int k, const Eigen::MatrixXd& a);

/// H_{j-1}/H_j - H_{i-1}/H_i for 1 <= i < j; nonnegative on the p-convex cone.
double maclaurin_ratio_gap(int i, int j, const CurvatureVector& lambdas);

/// j H_i H_{j-1;l} - i H_j H_{i-1;l}, with `l` 0-based.
double lemma_c_gap(int i, int j, int l, const CurvatureVector& lambdas);

/// H_i - ((i/m) lambda_l H_{i-1;l} + ((m-i)/m) H_{i;l}); zero up to rounding.
double splitting_residual(int i, int l, const CurvatureVector& lambdas);

struct GardingOptions {
    double negative_probability = 0.5;
    int max_attempts = 10000;
};

/// Draws a vector with H_1..H_p > 0. Positive base entries are log-uniform on
/// [0.1, 10]; when p < m one entry may be flipped negative. Rejection sampling.
CurvatureVector garding_sample(int m, int p, std::mt19937_64& rng, const GardingOptions& options = {});
CurvatureVector garding_sample(int m, int p, std::uint64_t seed, const GardingOptions& options = {});

/// True when H_1..H_p are all strictly positive.
bool in_garding_cone(int p, const CurvatureVector& lambdas);

} // namespace curvlab
