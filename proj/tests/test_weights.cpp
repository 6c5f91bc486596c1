#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "mixtest/errors.hpp"
#include "mixtest/simulation.hpp"
#include "mixtest/weights.hpp"

using namespace mixtest;

namespace {

// Dirichlet(1,...,1) columns via normalized exponentials.
Eigen::MatrixXd random_stochastic(int m, int n, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::MatrixXd w(m, n);
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int l = 0; l < m; ++l) {
            w(l, i) = -std::log(1.0 - unif(gen));
            sum += w(l, i);
        }
        w.col(i) /= sum;
    }
    return w;
}

// Cofactor-expansion determinant, independent of Eigen's decompositions.
double det_rec(const Eigen::MatrixXd& a) {
    const int m = static_cast<int>(a.rows());
    if (m == 1) return a(0, 0);
    double det = 0.0;
    for (int c = 0; c < m; ++c) {
        Eigen::MatrixXd minor(m - 1, m - 1);
        for (int r = 1; r < m; ++r) {
            int cc = 0;
            for (int c2 = 0; c2 < m; ++c2) {
                if (c2 == c) continue;
                minor(r - 1, cc++) = a(r, c2);
            }
        }
        det += ((c % 2 == 0) ? 1.0 : -1.0) * a(0, c) * det_rec(minor);
    }
    return det;
}

// Inverse through the adjugate: inv(A)_{ij} = cof(A)_{ji} / det(A).
Eigen::MatrixXd adjugate_inverse(const Eigen::MatrixXd& a) {
    const int m = static_cast<int>(a.rows());
    const double det = det_rec(a);
    Eigen::MatrixXd inv(m, m);
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) {
            Eigen::MatrixXd minor(m - 1, m - 1);
            int rr = 0;
            for (int r2 = 0; r2 < m; ++r2) {
                if (r2 == r) continue;
                int cc = 0;
                for (int c2 = 0; c2 < m; ++c2) {
                    if (c2 == c) continue;
                    minor(rr, cc++) = a(r2, c2);
                }
                ++rr;
            }
            const double cof = (((r + c) % 2 == 0) ? 1.0 : -1.0) *
                               (m == 1 ? 1.0 : det_rec(minor));
            inv(c, r) = cof / det;
        }
    }
    return inv;
}

const MixtureSpec& model(const std::string& name) {
    return builtin_models().at(name);
}

}  // namespace

TEST_CASE("weight matrix validation") {
    Eigen::MatrixXd ok(2, 3);
    ok << 0.3, 0.5, 1.0, 0.7, 0.5, 0.0;
    CHECK_NOTHROW(WeightMatrix{ok});

    Eigen::MatrixXd bad_sum = ok;
    bad_sum(0, 1) = 0.4;
    CHECK_THROWS_AS(WeightMatrix{bad_sum}, WeightError);
    CHECK_NOTHROW(WeightMatrix(bad_sum, /*renormalize=*/true));

    Eigen::MatrixXd negative = ok;
    negative(0, 2) = -0.1;
    negative(1, 2) = 1.1;
    CHECK_THROWS_AS(WeightMatrix{negative}, WeightError);
}

TEST_CASE("single-component design") {
    const WeightMatrix w(Eigen::MatrixXd::Ones(1, 7));
    const auto spectrum = gram_spectrum(w);
    CHECK(spectrum.gram(0, 0) == doctest::Approx(7.0));
    CHECK(spectrum.k_single == doctest::Approx(1.0));
    const auto duals = dual_basis(w);
    for (int i = 0; i < 7; ++i) CHECK(duals.at(0, i) == doctest::Approx(1.0));
}

TEST_CASE("built-in designs reproduce the reference eigenvalue ratios") {
    auto [y1, z1] = expand_weights(model("model1_h0"), 1000);
    CHECK(gram_spectrum(y1).k_single == doctest::Approx(0.0126).epsilon(0.02));
    CHECK(model_k(y1, z1) == doctest::Approx(0.013).epsilon(0.05));

    auto [y2, z2] = expand_weights(model("model2_h0"), 1000);
    CHECK(model_k(y2, z2) == doctest::Approx(0.033).epsilon(0.05));

    auto [y3, z3] = expand_weights(model("model3_h0"), 1000);
    CHECK(model_k(y3, z3) == doctest::Approx(0.068).epsilon(0.05));
}

TEST_CASE("rank-deficient designs are rejected") {
    Eigen::MatrixXd w(2, 6);
    w.setConstant(0.5);
    const WeightMatrix flat(w);
    CHECK_THROWS_AS(model_k(flat, flat), RankDeficient);
}

TEST_CASE("duality and the norm bound hold for random designs") {
    std::mt19937_64 gen(99);
    std::uniform_int_distribution<int> m_dist(1, 4);
    for (int trial = 0; trial < 100; ++trial) {
        const int m = m_dist(gen);
        const int n = 10 * m + static_cast<int>(gen() % 40);
        const WeightMatrix w(random_stochastic(m, n, gen));
        const auto duals = dual_basis(w);

        const Eigen::MatrixXd identity =
            w.entries() * duals.vectors().transpose() / n;
        REQUIRE((identity - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff() <
                1e-8);
        REQUIRE(duals.norm_sum() <= m / gram_spectrum(w).k_single + 1e-9);
    }
}

TEST_CASE("duals match the adjugate-inverse oracle") {
    std::mt19937_64 gen(7);
    for (int m = 1; m <= 4; ++m) {
        const int n = 12 * m;
        const WeightMatrix w(random_stochastic(m, n, gen));
        const auto duals = dual_basis(w);
        const Eigen::MatrixXd oracle =
            n * adjugate_inverse(w.entries() * w.entries().transpose()) * w.entries();
        CHECK((duals.vectors() - oracle).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("model K is invariant to observation order") {
    std::mt19937_64 gen(3);
    auto [omega, sigma] = expand_weights(model("model1_h0"), 50);
    const double reference = model_k(omega, sigma);

    Eigen::MatrixXd shuffled = omega.entries();
    for (int i = 49; i > 0; --i) {
        const int pick = static_cast<int>(gen() % (i + 1));
        shuffled.col(i).swap(shuffled.col(pick));
    }
    CHECK(model_k(WeightMatrix(shuffled), sigma) == doctest::Approx(reference));
}

TEST_CASE("mismatched sample sizes are rejected") {
    const WeightMatrix a(Eigen::MatrixXd::Ones(1, 5));
    const WeightMatrix b(Eigen::MatrixXd::Ones(1, 6));
    CHECK_THROWS_AS(model_k(a, b), DimensionMismatch);
}
