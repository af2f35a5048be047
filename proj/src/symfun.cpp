#include "curvlab/symfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "curvlab/errors.hpp"

namespace curvlab {

namespace {

void require_order(int k, int lo, int hi, const char* what)
{
    if (k < lo || k > hi) {
        throw DomainError(std::string(what) + ": order " + std::to_string(k) + " outside [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
}

double normalized_from_sigma(double s, int m, int k)
{
    return s / static_cast<double>(binomial(m, k));
}

int permutation_parity(const std::vector<int>& perm)
{
    int inversions = 0;
    for (std::size_t a = 0; a < perm.size(); ++a) {
        for (std::size_t b = a + 1; b < perm.size(); ++b) {
            if (perm[a] > perm[b]) ++inversions;
        }
    }
    return (inversions % 2 == 0) ? 1 : -1;
}

} // namespace

CurvatureVector::CurvatureVector(std::vector<double> values) : values_(std::move(values))
{
    if (values_.size() < 2) {
        throw DomainError("CurvatureVector needs at least two principal curvatures");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw DomainError("CurvatureVector entries must be finite");
    }
}

CurvatureVector::CurvatureVector(std::initializer_list<double> values)
    : CurvatureVector(std::vector<double>(values))
{
}

std::vector<double> CurvatureVector::without(int j) const
{
    if (j < 0 || j >= dim()) {
        throw DomainError("omitted index " + std::to_string(j) + " outside [0, " +
                          std::to_string(dim() - 1) + "]");
    }
    std::vector<double> out;
    out.reserve(values_.size() - 1);
    for (int i = 0; i < dim(); ++i) {
        if (i != j) out.push_back(values_[static_cast<std::size_t>(i)]);
    }
    return out;
}

long long binomial(int n, int k)
{
    if (n < 0 || k < 0) throw DomainError("binomial: negative argument");
    if (k > n) return 0;
    k = std::min(k, n - k);
    long long result = 1;
    for (int i = 1; i <= k; ++i) {
        // result * (n - k + i) / i stays integral at every step
        if (result > std::numeric_limits<long long>::max() / (n - k + i)) {
            throw DomainError("binomial: overflow");
        }
        result = result * (n - k + i) / i;
    }
    return result;
}

std::vector<double> elementary_symmetric(std::span<const double> values, int kmax)
{
    const int m = static_cast<int>(values.size());
    kmax = std::min(kmax, m);
    std::vector<double> e(static_cast<std::size_t>(kmax) + 1, 0.0);
    e[0] = 1.0;
    int processed = 0;
    for (double lambda : values) {
        ++processed;
        for (int q = std::min(processed, kmax); q >= 1; --q) {
            e[q] += lambda * e[q - 1];
        }
    }
    return e;
}

double sigma(int k, const CurvatureVector& lambdas)
{
    require_order(k, 0, lambdas.dim(), "sigma");
    return elementary_symmetric(lambdas.values(), k)[static_cast<std::size_t>(k)];
}

double normalized_h(int k, const CurvatureVector& lambdas)
{
    return normalized_from_sigma(sigma(k, lambdas), lambdas.dim(), k);
}

std::vector<double> normalized_h_all(const CurvatureVector& lambdas)
{
    const int m = lambdas.dim();
    auto e = elementary_symmetric(lambdas.values(), m);
    for (int k = 0; k <= m; ++k) e[k] = normalized_from_sigma(e[k], m, k);
    return e;
}

double restricted_h(int k, int j, const CurvatureVector& lambdas)
{
    const int m = lambdas.dim();
    require_order(k, 0, m - 1, "restricted_h");
    const auto rest = lambdas.without(j);
    const double s = elementary_symmetric(rest, k)[static_cast<std::size_t>(k)];
    return normalized_from_sigma(s, m - 1, k);
}

NewtonSpectrum newton_spectrum(int k, const CurvatureVector& lambdas)
{
    const int m = lambdas.dim();
    require_order(k, 0, m - 1, "newton_spectrum");
    NewtonSpectrum out;
    out.order = k;
    out.eigenvalues.resize(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        const auto rest = lambdas.without(j);
        out.eigenvalues[j] = elementary_symmetric(rest, k)[static_cast<std::size_t>(k)];
    }
    return out;
}

Eigen::MatrixXd newton_matrix_oracle(int k, const Eigen::MatrixXd& a)
{
    const int m = static_cast<int>(a.rows());
    if (a.cols() != a.rows()) throw DomainError("newton_matrix_oracle: matrix must be square");
    if (m > 6) throw DomainError("newton_matrix_oracle: refused for m > 6 (oracle scale only)");
    require_order(k, 1, m - 1, "newton_matrix_oracle");

    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    const int len = k + 1;
    std::vector<int> upper(static_cast<std::size_t>(len));
    std::vector<int> perm(static_cast<std::size_t>(len));

    // Odometer over upper index tuples (i, i1, ..., ik).
    std::vector<int> counter(static_cast<std::size_t>(len), 0);
    double factorial = 1.0;
    for (int q = 2; q <= k; ++q) factorial *= q;

    while (true) {
        upper = counter;
        std::vector<int> sorted = upper;
        std::sort(sorted.begin(), sorted.end());
        const bool distinct = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
        if (distinct) {
            std::iota(perm.begin(), perm.end(), 0);
            do {
                // lower tuple (j, j1, ..., jk) = upper permuted
                const int sign = permutation_parity(perm);
                double prod = 1.0;
                for (int s = 1; s < len; ++s) {
                    const int row = upper[perm[s]]; // j_s
                    const int col = upper[s];       // i_s
                    prod *= a(row, col);
                }
                t(upper[0], upper[perm[0]]) += sign * prod;
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
        int pos = len - 1;
        while (pos >= 0 && ++counter[pos] == m) {
            counter[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    return t / factorial;
}

double maclaurin_ratio_gap(int i, int j, const CurvatureVector& lambdas)
{
    const int m = lambdas.dim();
    require_order(i, 1, m, "maclaurin_ratio_gap");
    require_order(j, 1, m, "maclaurin_ratio_gap");
    if (i >= j) throw DomainError("maclaurin_ratio_gap: need i < j");
    const auto h = normalized_h_all(lambdas);
    if (h[j] == 0.0 || h[i] == 0.0) {
        throw PreconditionError("maclaurin_ratio_gap: vanishing denominator (vector not p-convex)");
    }
    return h[j - 1] / h[j] - h[i - 1] / h[i];
}

double lemma_c_gap(int i, int j, int l, const CurvatureVector& lambdas)
{
    const int m = lambdas.dim();
    require_order(i, 1, m, "lemma_c_gap");
    require_order(j, 1, m, "lemma_c_gap");
    if (i >= j) throw DomainError("lemma_c_gap: need i < j");
    return j * normalized_h(i, lambdas) * restricted_h(j - 1, l, lambdas) -
           i * normalized_h(j, lambdas) * restricted_h(i - 1, l, lambdas);
}

double splitting_residual(int i, int l, const CurvatureVector& lambdas)
{
    const int m = lambdas.dim();
    require_order(i, 1, m - 1, "splitting_residual");
    const double split = (static_cast<double>(i) / m) * lambdas[l] * restricted_h(i - 1, l, lambdas) +
                         (static_cast<double>(m - i) / m) * restricted_h(i, l, lambdas);
    return normalized_h(i, lambdas) - split;
}

bool in_garding_cone(int p, const CurvatureVector& lambdas)
{
    require_order(p, 1, lambdas.dim(), "in_garding_cone");
    const auto e = elementary_symmetric(lambdas.values(), p);
    for (int q = 1; q <= p; ++q) {
        if (!(e[q] > 0.0)) return false;
    }
    return true;
}

CurvatureVector garding_sample(int m, int p, std::mt19937_64& rng, const GardingOptions& options)
{
    if (m < 2) throw DomainError("garding_sample: m must be >= 2");
    require_order(p, 1, m, "garding_sample");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> pick(0, m - 1);
    const double log_lo = std::log(0.1);
    const double log_hi = std::log(10.0);

    std::vector<double> values(static_cast<std::size_t>(m));
    for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
        for (double& v : values) v = std::exp(log_lo + (log_hi - log_lo) * unit(rng));
        // H_m > 0 with a negative entry is impossible, so only perturb below the top order.
        if (p < m && unit(rng) < options.negative_probability) {
            const int idx = pick(rng);
            values[idx] = -unit(rng) * values[idx];
        }
        CurvatureVector candidate(values);
        if (in_garding_cone(p, candidate)) return candidate;
    }
    throw SamplingError("garding_sample: rejection budget exhausted for m=" + std::to_string(m) +
                        ", p=" + std::to_string(p));
}

CurvatureVector garding_sample(int m, int p, std::uint64_t seed, const GardingOptions& options)
{
    std::mt19937_64 rng(seed);
    return garding_sample(m, p, rng, options);
}

} // namespace curvlab
