#include "mixtest/statistic.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "mixtest/errors.hpp"
#include "mixtest/kahan.hpp"

namespace mixtest {

PairedSample::PairedSample(std::vector<double> y_in, std::vector<double> z_in,
                           WeightMatrix omega_in, WeightMatrix sigma_in)
    : y(std::move(y_in)),
      z(std::move(z_in)),
      omega(std::move(omega_in)),
      sigma(std::move(sigma_in)) {
    const int n = static_cast<int>(y.size());
    if (static_cast<int>(z.size()) != n || omega.size() != n || sigma.size() != n) {
        throw DimensionMismatch("PairedSample: sample sizes disagree");
    }
    if (omega.components() != sigma.components()) {
        throw DimensionMismatch("PairedSample: component counts disagree");
    }
}

RateParams select_level(int n, double s) {
    if (n < 2) throw InvalidParam("select_level: n must be at least 2");
    if (s <= 0.0) throw InvalidParam("select_level: s must be positive");

    RateParams out;
    out.s = s;
    out.n = n;
    const double exponent = 2.0 / (1.0 + 4.0 * s);
    // smallest j with 2^j >= n^{2/(1+4s)}
    out.level = static_cast<int>(std::ceil(exponent * std::log2(static_cast<double>(n)) - 1e-12));
    if (out.level < 0) out.level = 0;
    out.rate = std::pow(static_cast<double>(n), -s * exponent);
    return out;
}

namespace {

void check_dimensions(const PairedSample& sample, const DualBasis& a,
                      const DualBasis& b) {
    if (a.size() != sample.size() || b.size() != sample.size() ||
        a.components() != sample.components() ||
        b.components() != sample.components()) {
        throw DimensionMismatch("statistic: dual basis does not match sample");
    }
}

}  // namespace

double statistic_naive(const PairedSample& sample, const DualBasis& a,
                       const DualBasis& b, const ScalingBasis& basis, int level) {
    check_dimensions(sample, a, b);
    const int n = sample.size();
    const int m = sample.components();

    // The sum over k in the definition runs over all of Z; only translates
    // active for at least one observation contribute.
    std::unordered_set<long> active;
    for (int i = 0; i < n; ++i) {
        for (long k : active_translates(basis, level, sample.y[i])) active.insert(k);
        for (long k : active_translates(basis, level, sample.z[i])) active.insert(k);
    }

    KahanSum total;
    for (long k : active) {
        const LevelIndex idx{level, k};
        std::vector<double> phi_y(n), phi_z(n);
        for (int i = 0; i < n; ++i) {
            phi_y[i] = eval_phi_jk(basis, idx, sample.y[i]);
            phi_z[i] = eval_phi_jk(basis, idx, sample.z[i]);
        }
        for (int l = 0; l < m; ++l) {
            for (int i1 = 0; i1 < n; ++i1) {
                const double u1 = a.at(l, i1) * phi_y[i1] - b.at(l, i1) * phi_z[i1];
                if (u1 == 0.0) continue;
                for (int i2 = 0; i2 < n; ++i2) {
                    if (i2 == i1) continue;
                    const double u2 =
                        a.at(l, i2) * phi_y[i2] - b.at(l, i2) * phi_z[i2];
                    total += u1 * u2;
                }
            }
        }
    }
    return total.value() / (static_cast<double>(n) * static_cast<double>(n));
}

double statistic_fast(const PairedSample& sample, const DualBasis& a,
                      const DualBasis& b, const ScalingBasis& basis, int level) {
    check_dimensions(sample, a, b);
    if (level > kMaxLevel) {
        throw InvalidParam("statistic_fast: level exceeds supported maximum");
    }
    const int n = sample.size();
    const int m = sample.components();

    struct Accumulator {
        std::vector<KahanSum> linear;   // S_{l,k} = sum_i u_{i,l,k}
        std::vector<KahanSum> squared;  // Q_{l,k} = sum_i u_{i,l,k}^2
    };
    std::unordered_map<long, Accumulator> per_translate;

    for (int i = 0; i < n; ++i) {
        const auto ky = active_translates(basis, level, sample.y[i]);
        const auto kz = active_translates(basis, level, sample.z[i]);
        std::vector<long> ks = ky;
        for (long k : kz) {
            if (std::find(ks.begin(), ks.end(), k) == ks.end()) ks.push_back(k);
        }
        for (long k : ks) {
            const LevelIndex idx{level, k};
            const double phi_y = eval_phi_jk(basis, idx, sample.y[i]);
            const double phi_z = eval_phi_jk(basis, idx, sample.z[i]);
            auto& acc = per_translate[k];
            if (acc.linear.empty()) {
                acc.linear.resize(m);
                acc.squared.resize(m);
            }
            for (int l = 0; l < m; ++l) {
                const double u = a.at(l, i) * phi_y - b.at(l, i) * phi_z;
                acc.linear[l] += u;
                acc.squared[l] += u * u;
            }
        }
    }

    KahanSum total;
    for (const auto& [k, acc] : per_translate) {
        for (int l = 0; l < m; ++l) {
            const double s = acc.linear[l].value();
            total += s * s - acc.squared[l].value();
        }
    }
    return total.value() / (static_cast<double>(n) * static_cast<double>(n));
}

TestOutcome evaluate_test(const PairedSample& sample, double s, double threshold,
                          const ScalingBasis& basis, double radius, double c_t) {
    const RateParams rate = select_level(sample.size(), s);
    if (rate.level > kMaxLevel) {
        throw InvalidParam("evaluate_test: selected level exceeds supported maximum");
    }
    const double k = model_k(sample.omega, sample.sigma);
    const DualBasis a = dual_basis(sample.omega);
    const DualBasis b = dual_basis(sample.sigma);

    TestOutcome out;
    out.t_j = statistic_fast(sample, a, b, basis, rate.level);
    out.level = rate.level;
    out.threshold = threshold;
    out.reject = out.t_j > threshold;
    out.k = k;

    const double l = basis.half_support();
    const double m = static_cast<double>(sample.components());
    const double n = static_cast<double>(sample.size());
    out.diagnostics["bias_bound"] = 8.0 * l * m * radius * radius / (k * n);
    out.diagnostics["null_variance_bound"] =
        c_t * m * m * std::ldexp(1.0, rate.level) / (k * k * n * n);
    return out;
}

}  // namespace mixtest
