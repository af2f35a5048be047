#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <random>

#include "curvlab/errors.hpp"
#include "curvlab/symfun.hpp"
#include "oracles.hpp"

using namespace curvlab;
using doctest::Approx;

namespace {

CurvatureVector random_vector(std::mt19937_64& rng, int m, double lo = -3.0, double hi = 3.0)
{
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(static_cast<std::size_t>(m));
    for (auto& x : v) x = u(rng);
    return CurvatureVector(v);
}

} // namespace

TEST_CASE("sigma on small vectors")
{
    CHECK(sigma(0, {4.0, -2.0, 7.0}) == 1.0);
    CHECK(sigma(2, {1.0, 2.0, 3.0}) == 11.0);
    CHECK(sigma(3, {1.0, 1.0, 1.0}) == 1.0);
    CHECK(sigma(1, {1.0, 2.0, 3.0}) == 6.0);
}

TEST_CASE("normalized mean curvatures")
{
    CHECK(normalized_h(1, {2.0, 0.4}) == Approx(1.2).epsilon(1e-15));
    CHECK(normalized_h(2, {1.0, 2.0, 3.0}) == Approx(11.0 / 3.0).epsilon(1e-15));
    CHECK(normalized_h(0, {1.0, 2.0, 3.0}) == 1.0);
    for (int m = 2; m <= 7; ++m) {
        const CurvatureVector c(std::vector<double>(static_cast<std::size_t>(m), 1.7));
        CHECK(normalized_h(m, c) == Approx(std::pow(1.7, m)).epsilon(1e-13));
    }
    const auto all = normalized_h_all({1.0, 2.0, 3.0});
    REQUIRE(all.size() == 4);
    CHECK(all[2] == Approx(11.0 / 3.0));
    CHECK(all[3] == Approx(6.0));
}

TEST_CASE("restricted mean curvatures")
{
    CHECK(restricted_h(0, 1, {1.0, 2.0, 3.0}) == 1.0);
    CHECK(restricted_h(1, 0, {5.0, 1.0, 1.0}) == Approx(1.0));
    CHECK(restricted_h(2, 2, {1.0, 2.0, 3.0}) == Approx(2.0));
    CHECK_THROWS_AS(restricted_h(1, 3, {1.0, 2.0, 3.0}), DomainError);
    CHECK_THROWS_AS(restricted_h(3, 0, {1.0, 2.0, 3.0}), DomainError);
}

TEST_CASE("Newton spectrum")
{
    const auto t0 = newton_spectrum(0, {1.0, 2.0, 3.0});
    CHECK(t0.eigenvalues == std::vector<double>{1.0, 1.0, 1.0});
    const auto t1 = newton_spectrum(1, {1.0, 2.0, 3.0});
    CHECK(t1.eigenvalues == std::vector<double>{5.0, 4.0, 3.0});
    double trace = 0.0;
    for (double x : t1.eigenvalues) trace += x;
    CHECK(trace == 12.0);
    CHECK(trace == (3 - 1) * sigma(1, {1.0, 2.0, 3.0}));
}

TEST_CASE("generalized Kronecker delta oracle")
{
    const Eigen::MatrixXd d123 = Eigen::Vector3d(1, 2, 3).asDiagonal();
    const Eigen::MatrixXd t = newton_matrix_oracle(1, d123);
    CHECK((t - Eigen::Matrix3d(Eigen::Vector3d(5, 4, 3).asDiagonal())).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((newton_matrix_oracle(1, Eigen::Matrix3d::Identity()) - 2.0 * Eigen::Matrix3d::Identity()).norm() < 1e-14);
    CHECK((newton_matrix_oracle(2, Eigen::Matrix3d::Identity()) - Eigen::Matrix3d::Identity()).norm() < 1e-14);
    CHECK_THROWS_AS(newton_matrix_oracle(1, Eigen::MatrixXd::Identity(7, 7)), DomainError);

    // Similarity invariance: for symmetric A the oracle has the Newton
    // spectrum of the eigenvalues of A.
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int m = 3; m <= 5; ++m) {
        Eigen::MatrixXd b(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) b(i, j) = g(rng);
        const Eigen::MatrixXd a = b + b.transpose();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
        const std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + m);
        for (int k = 1; k < m; ++k) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> et(newton_matrix_oracle(k, a));
            std::vector<double> got(et.eigenvalues().data(), et.eigenvalues().data() + m);
            auto want = newton_spectrum(k, CurvatureVector(ev)).eigenvalues;
            std::sort(got.begin(), got.end());
            std::sort(want.begin(), want.end());
            for (int i = 0; i < m; ++i) CHECK(got[i] == Approx(want[i]).epsilon(1e-9).scale(1.0));
        }
    }
}

TEST_CASE("Newton-Maclaurin ratio gap")
{
    CHECK(maclaurin_ratio_gap(1, 2, {1.0, 2.0, 3.0}) == Approx(1.0 / 22.0).epsilon(1e-14));
    CHECK(std::abs(maclaurin_ratio_gap(1, 3, {2.5, 2.5, 2.5})) < 1e-15);
    CHECK(std::abs(maclaurin_ratio_gap(2, 3, {0.7, 0.7, 0.7, 0.7})) < 1e-15);
    CHECK_THROWS_AS(maclaurin_ratio_gap(1, 2, {1.0, -1.0}), PreconditionError);
    CHECK_THROWS_AS(maclaurin_ratio_gap(2, 2, {1.0, 2.0}), DomainError);
}

TEST_CASE("lemma (2c) gap")
{
    CHECK(lemma_c_gap(1, 2, 0, {1.0, 1.0, 1.0}) == Approx(1.0));
}

TEST_CASE("splitting identity")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int m = 2 + trial % 7;
        const auto lam = random_vector(rng, m);
        for (int i = 1; i < m; ++i) {
            for (int l = 0; l < m; ++l) {
                const auto rest = lam.without(l);
                const auto s = elementary_symmetric(rest, m - 1);
                CHECK(sigma(i, lam) == Approx(lam[l] * s[i - 1] + s[i]).epsilon(1e-12).scale(1.0));
                CHECK(std::abs(splitting_residual(i, l, lam)) < 1e-12 * (1.0 + std::abs(normalized_h(i, lam))) * 10);
            }
        }
    }
}

TEST_CASE("Garding sampler")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto lam = garding_sample(5, 5, rng);
        for (int q = 1; q <= 5; ++q) CHECK(normalized_h(q, lam) > 0.0);
        const auto low = garding_sample(6, 2, rng);
        CHECK(in_garding_cone(2, low));
    }
    const auto a = garding_sample(4, 2, 99);
    const auto b = garding_sample(4, 2, 99);
    CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
    CHECK(in_garding_cone(1, {3.0, 2.0, -1.0}));
    CHECK(normalized_h(1, {3.0, 2.0, -1.0}) == Approx(4.0 / 3.0));
    CHECK(in_garding_cone(2, {3.0, 2.0, -1.0}));
    CHECK_FALSE(in_garding_cone(2, {3.0, 1.0, -2.0}));
    CHECK_THROWS_AS(garding_sample(3, 4, rng), DomainError);
    GardingOptions tight;
    tight.max_attempts = 0;
    CHECK_THROWS_AS(garding_sample(3, 2, rng, tight), SamplingError);
}

TEST_CASE("input validation")
{
    CHECK_THROWS_AS(CurvatureVector({1.0}), DomainError);
    CHECK_THROWS_AS(CurvatureVector({1.0, std::nan("")}), DomainError);
    CHECK_THROWS_AS(sigma(4, {1.0, 2.0, 3.0}), DomainError);
    CHECK_THROWS_AS(sigma(-1, {1.0, 2.0, 3.0}), DomainError);
    CHECK_THROWS_AS(newton_spectrum(3, {1.0, 2.0, 3.0}), DomainError);
}

TEST_CASE("property: recurrence matches the subset oracle")
{
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 2000; ++trial) {
        const int m = 2 + trial % 5;
        const auto lam = random_vector(rng, m);
        const auto s = elementary_symmetric(lam.values(), m);
        for (int k = 0; k <= m; ++k) {
            const double want = oracle::subset_sigma(k, lam.values());
            CHECK(std::abs(s[k] - want) <= 1e-12 * std::max(1.0, std::abs(want)) * 10);
        }
    }
}

TEST_CASE("property: permutation symmetry")
{
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 200; ++trial) {
        const int m = 2 + trial % 6;
        auto lam = random_vector(rng, m);
        std::vector<double> v(lam.values().begin(), lam.values().end());
        std::shuffle(v.begin(), v.end(), rng);
        const CurvatureVector p(v);
        for (int k = 0; k <= m; ++k) CHECK(sigma(k, p) == Approx(sigma(k, lam)).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("property: Newton trace identity")
{
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 300; ++trial) {
        const int m = 2 + trial % 7;
        const auto lam = random_vector(rng, m);
        for (int k = 0; k < m; ++k) {
            const auto spec = newton_spectrum(k, lam);
            double tr = 0.0;
            for (double x : spec.eigenvalues) tr += x;
            CHECK(tr == Approx((m - k) * sigma(k, lam)).epsilon(1e-11).scale(1.0));
            CHECK(normalized_h(k, lam) ==
                  Approx(tr / ((m - k) * static_cast<double>(binomial(m, k)))).epsilon(1e-11).scale(1.0));
        }
    }
}

TEST_CASE("property: positivity cascade on the positive cone")
{
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 300; ++trial) {
        const int m = 2 + trial % 7;
        const int p = 1 + trial % m;
        const auto lam = garding_sample(m, p, rng);
        for (int k = 1; k < p; ++k) {
            CHECK(normalized_h(k, lam) > 0.0);
            for (double x : newton_spectrum(k, lam).eigenvalues) CHECK(x > 0.0);
            for (int j = 0; j < m; ++j) CHECK(restricted_h(k, j, lam) > 0.0);
        }
    }
}

TEST_CASE("property: Newton-Maclaurin and lemma (2c) on Garding samples")
{
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 2000; ++trial) {
        const int m = 2 + trial % 7;
        const int p = 1 + static_cast<int>(rng() % static_cast<unsigned>(m));
        const auto lam = garding_sample(m, p, rng);
        const auto h = normalized_h_all(lam);
        for (int j = 2; j <= p; ++j) {
            for (int i = 1; i < j; ++i) {
                const double scale = std::max(std::abs(h[j - 1] / h[j]), std::abs(h[i - 1] / h[i]));
                CHECK(maclaurin_ratio_gap(i, j, lam) >= -1e-12 * scale);
                for (int l = 0; l < m; ++l) CHECK(lemma_c_gap(i, j, l, lam) > 0.0);
            }
        }
    }
}

TEST_CASE("property: binomial identities")
{
    for (int n = 3; n <= 20; ++n) {
        for (int k = 2; k <= n - 1; ++k) {
            // (n-k)/(n-2) C(n-2,k-2) = C(n-3,k-2), cross-multiplied
            CHECK((n - k) * binomial(n - 2, k - 2) == (n - 2) * binomial(n - 3, k - 2));
        }
    }
    CHECK(binomial(10, 3) == 120);
    CHECK(binomial(5, 0) == 1);
    CHECK(binomial(5, 6) == 0);
    CHECK_THROWS_AS(binomial(-1, 0), DomainError);
    CHECK_THROWS_AS(binomial(200, 100), DomainError);

    // Same identity on restricted curvatures: (n-k)/(n-2) sigma_{k-2;j} = C(n-3,k-2) H_{k-2;j}.
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 4 + trial % 5;
        const int m = n - 1;
        const auto lam = random_vector(rng, m);
        for (int k = 2; k <= n - 1; ++k) {
            for (int j = 0; j < m; ++j) {
                const auto rest = lam.without(j);
                const double s = elementary_symmetric(rest, k - 2)[static_cast<std::size_t>(k - 2)];
                const double lhs = static_cast<double>(n - k) / (n - 2) * s;
                const double rhs = static_cast<double>(binomial(n - 3, k - 2)) * restricted_h(k - 2, j, lam);
                CHECK(lhs == Approx(rhs).epsilon(1e-12).scale(1.0));
            }
        }
    }
}
