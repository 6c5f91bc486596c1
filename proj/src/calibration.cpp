#include "mixtest/calibration.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <vector>

#include "mixtest/errors.hpp"
#include "mixtest/normal.hpp"
#include "mixtest/parallel.hpp"

namespace mixtest {

double appendix_ct(double radius, double half_support, double sup_norm_phi) {
    if (radius <= 0.0 || half_support <= 0.0 || sup_norm_phi <= 0.0) {
        throw InvalidParam("appendix_ct: all parameters must be positive");
    }
    const double r = radius;
    const double l = half_support;
    const double phi2 = sup_norm_phi * sup_norm_phi;

    const double k1 = 224.0 * r * l * l * l * phi2;
    const double k2 = 32.0 * r * l * l * phi2;
    const double cbar = k1 + k2;

    const double c31 =
        4.0 * l * l * std::sqrt(r) * (2.0 * std::sqrt(r) + std::sqrt(2.0 * l) * sup_norm_phi);
    const double c32 = 48.0 * std::sqrt(2.0 * r * std::pow(l, 5.0)) * phi2;
    const double c33 = c32;
    const double c34 = 4.0 * l * sup_norm_phi * std::sqrt(r) *
                       (4.0 * l * std::sqrt(r) + std::pow(2.0 * l, 1.5) * sup_norm_phi);
    const double ctilde = c31 + c32 + c33 + c34;

    return std::max(2.0 * cbar, 4.0 * ctilde);
}

namespace {

double threshold_slope(const ModelConstants& c) {
    // t = (2 sqrt(C_T / gamma) + 8 L R^2) M / K
    const double ct = appendix_ct(c.radius, c.half_support, c.sup_norm_phi);
    return (2.0 * std::sqrt(ct / c.gamma) +
            8.0 * c.half_support * c.radius * c.radius) *
           static_cast<double>(c.components) / c.k;
}

void check_constants(const ModelConstants& c) {
    if (c.gamma <= 0.0 || c.gamma >= 1.0) {
        throw InvalidParam("ModelConstants: gamma must lie in (0,1)");
    }
    if (c.k <= 0.0 || c.k > 1.0) {
        throw InvalidParam("ModelConstants: K must lie in (0,1]");
    }
    if (c.radius <= 0.0 || c.half_support <= 0.0 || c.sup_norm_phi <= 0.0 ||
        c.components < 1 || c.s <= 0.0) {
        throw InvalidParam("ModelConstants: parameters out of range");
    }
}

}  // namespace

double theoretical_threshold(const ModelConstants& constants, const RateParams& rate) {
    check_constants(constants);
    return threshold_slope(constants) * rate.rate * rate.rate;
}

double upper_constant(const ModelConstants& constants) {
    check_constants(constants);
    const double ct = appendix_ct(constants.radius, constants.half_support,
                                  constants.sup_norm_phi);
    const double t = threshold_slope(constants);
    const double squared =
        2.0 * (std::sqrt(6.0 * ct / constants.gamma) / constants.k + constants.radius +
               t / static_cast<double>(constants.components));
    return std::sqrt(squared);
}

double lower_constant(const ModelConstants& constants) {
    // gamma = 1 is allowed here: ln(4*0+1) = 0 gives the degenerate constant 0.
    if (constants.gamma <= 0.0 || constants.gamma > 1.0) {
        throw InvalidParam("lower_constant: gamma must lie in (0,1]");
    }
    if (constants.k <= 0.0 || constants.k > 1.0 || constants.radius <= 0.0 ||
        constants.half_support <= 0.0 || constants.components < 1 ||
        constants.s <= 0.0) {
        throw InvalidParam("lower_constant: parameters out of range");
    }
    const double c1 = constants.density_floor;
    if (c1 <= 0.0) throw InvalidParam("lower_constant: density floor must be positive");

    const double lhs = c1 * c1 / (constants.half_support * constants.k * constants.k) *
                       std::log(4.0 * (1.0 - constants.gamma) * (1.0 - constants.gamma) + 1.0);
    const double rhs = 2.0 * constants.radius * constants.radius;
    const double fourth = std::min(lhs, rhs) * std::pow(2.0, -4.0 * constants.s) /
                          (4.0 * constants.components * constants.components);
    return std::pow(fourth, 0.25);
}

namespace {

// Statistic values over independent replications of a model. Weight matrices
// and dual bases are shared; each replication draws fresh observations from
// its own seed stream.
std::vector<double> simulate_statistics(const MixtureSpec& model, int n, int level,
                                        int reps, std::uint64_t seed,
                                        unsigned threads) {
    auto [omega, sigma] = expand_weights(model, n);
    const DualBasis a = dual_basis(omega);
    const DualBasis b = dual_basis(sigma);
    const ScalingBasis basis = ScalingBasis::haar();

    std::vector<double> values(reps);
    parallel_for(reps, threads, [&](int rep) {
        PairedSample sample = sample_mixture(model, n, split_seed(seed, rep));
        values[rep] = statistic_fast(sample, a, b, basis, level);
    });
    return values;
}

double interpolated_quantile(std::vector<double> values, double p) {
    std::sort(values.begin(), values.end());
    const double h = p * (static_cast<double>(values.size()) - 1.0);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= values.size()) return values.back();
    return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

}  // namespace

double mc_quantile_threshold(const MixtureSpec& model, int n, double s,
                             double gamma1, int reps, std::uint64_t seed,
                             unsigned threads) {
    if (reps < 100) throw InvalidParam("mc_quantile_threshold: reps must be >= 100");
    if (gamma1 <= 0.0 || gamma1 >= 1.0) {
        throw InvalidParam("mc_quantile_threshold: gamma1 must lie in (0,1)");
    }
    const RateParams rate = select_level(n, s);
    auto values = simulate_statistics(model, n, rate.level, reps, seed, threads);
    return interpolated_quantile(std::move(values), 1.0 - gamma1);
}

namespace {

std::pair<double, double> sweep_optimal_threshold(const std::vector<double>& h0_values,
                                                  const std::vector<double>& h1_values) {
    std::vector<double> candidates = h0_values;
    candidates.insert(candidates.end(), h1_values.begin(), h1_values.end());
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::vector<double> h0_sorted = h0_values;
    std::vector<double> h1_sorted = h1_values;
    std::sort(h0_sorted.begin(), h0_sorted.end());
    std::sort(h1_sorted.begin(), h1_sorted.end());

    const double n0 = static_cast<double>(h0_sorted.size());
    const double n1 = static_cast<double>(h1_sorted.size());

    double best_t = candidates.front();
    double best_sum = std::numeric_limits<double>::infinity();
    for (double t : candidates) {  // ascending, so ties keep the smaller t
        const auto above0 = h0_sorted.end() -
                            std::upper_bound(h0_sorted.begin(), h0_sorted.end(), t);
        const auto at_or_below1 =
            std::upper_bound(h1_sorted.begin(), h1_sorted.end(), t) - h1_sorted.begin();
        const double sum = static_cast<double>(above0) / n0 +
                           static_cast<double>(at_or_below1) / n1;
        if (sum < best_sum) {
            best_sum = sum;
            best_t = t;
        }
    }
    return {best_t, best_sum};
}

}  // namespace

std::pair<double, double> optimal_sum_threshold(const MixtureSpec& h0,
                                                const MixtureSpec& h1, int n,
                                                double s, int reps,
                                                std::uint64_t seed,
                                                unsigned threads) {
    if (reps < 100) throw InvalidParam("optimal_sum_threshold: reps must be >= 100");
    const RateParams rate = select_level(n, s);
    auto h0_values = simulate_statistics(h0, n, rate.level, reps, seed, threads);
    auto h1_values =
        simulate_statistics(h1, n, rate.level, reps, split_seed(seed, 0x51u), threads);
    return sweep_optimal_threshold(h0_values, h1_values);
}

double bootstrap_threshold(const PairedSample& sample, double s, double alpha,
                           int resamples, std::uint64_t seed, unsigned threads) {
    if (resamples < 50) throw InvalidParam("bootstrap_threshold: resamples must be >= 50");
    if (alpha <= 0.0 || alpha >= 1.0) {
        throw InvalidParam("bootstrap_threshold: alpha must lie in (0,1)");
    }
    const int n = sample.size();
    const int m = sample.components();
    const RateParams rate = select_level(n, s);
    const ScalingBasis basis = ScalingBasis::haar();

    std::vector<double> values(resamples);
    parallel_for(resamples, threads, [&](int rep) {
        Rng rng(split_seed(seed, rep));
        std::vector<double> y(n), z(n);
        Eigen::MatrixXd omega(m, n), sigma(m, n);
        // Each observation is resampled jointly with its weight column.
        for (int i = 0; i < n; ++i) {
            const int pick = std::min(n - 1, static_cast<int>(rng.uniform() * n));
            y[i] = sample.y[pick];
            omega.col(i) = sample.omega.entries().col(pick);
        }
        for (int i = 0; i < n; ++i) {
            const int pick = std::min(n - 1, static_cast<int>(rng.uniform() * n));
            z[i] = sample.z[pick];
            sigma.col(i) = sample.sigma.entries().col(pick);
        }
        PairedSample resampled(std::move(y), std::move(z),
                               WeightMatrix(std::move(omega)),
                               WeightMatrix(std::move(sigma)));
        const DualBasis a = dual_basis(resampled.omega);
        const DualBasis b = dual_basis(resampled.sigma);
        values[rep] = statistic_fast(resampled, a, b, basis, rate.level);
    });

    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= resamples;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= (resamples - 1);

    return std::sqrt(var) * normal_quantile(1.0 - alpha);
}

TestOutcome run_test(const PairedSample& sample, double s,
                     const ThresholdSpec& threshold, const ScalingBasis& basis,
                     double radius, unsigned threads) {
    const double c_t = appendix_ct(radius, basis.half_support(), basis.sup_norm_phi());

    double resolved = 0.0;
    switch (threshold.method) {
        case ThresholdSpec::Method::Fixed:
            if (!threshold.value) {
                throw InvalidParam("run_test: fixed threshold requires a value");
            }
            resolved = *threshold.value;
            break;
        case ThresholdSpec::Method::Theoretical: {
            ModelConstants constants;
            constants.radius = radius;
            constants.half_support = basis.half_support();
            constants.sup_norm_phi = basis.sup_norm_phi();
            constants.components = sample.components();
            constants.k = model_k(sample.omega, sample.sigma);
            constants.gamma = threshold.gamma;
            constants.s = s;
            resolved = theoretical_threshold(constants, select_level(sample.size(), s));
            break;
        }
        case ThresholdSpec::Method::MCQuantile:
            if (!threshold.calibration_model) {
                throw InvalidParam("run_test: MC quantile needs a calibration model");
            }
            resolved = mc_quantile_threshold(*threshold.calibration_model, sample.size(),
                                             s, threshold.gamma, threshold.reps,
                                             threshold.seed, threads);
            break;
        case ThresholdSpec::Method::OptimalSum:
            if (!threshold.calibration_model || !threshold.alternative_model) {
                throw InvalidParam("run_test: optimal-sum needs both models");
            }
            resolved = optimal_sum_threshold(*threshold.calibration_model,
                                             *threshold.alternative_model,
                                             sample.size(), s, threshold.reps,
                                             threshold.seed, threads)
                           .first;
            break;
        case ThresholdSpec::Method::Bootstrap:
            resolved = bootstrap_threshold(sample, s, threshold.alpha,
                                           threshold.resamples, threshold.seed,
                                           threads);
            break;
    }

    return evaluate_test(sample, s, resolved, basis, radius, c_t);
}

std::vector<ExperimentReport> run_power_study(const MixtureSpec& h0,
                                              const MixtureSpec& h1,
                                              const std::vector<int>& n_list,
                                              double s, double gamma1, int reps,
                                              std::uint64_t seed,
                                              unsigned threads) {
    if (reps < 100) throw InvalidParam("run_power_study: reps must be >= 100");

    std::vector<ExperimentReport> reports;
    for (int n : n_list) {
        const auto start = std::chrono::steady_clock::now();
        const RateParams rate = select_level(n, s);
        const std::uint64_t base = split_seed(seed, static_cast<std::uint64_t>(n));

        auto calib = simulate_statistics(h0, n, rate.level, reps, base, threads);
        auto h0_eval = simulate_statistics(h0, n, rate.level, reps,
                                           split_seed(base, 0xa0u), threads);
        auto h1_eval = simulate_statistics(h1, n, rate.level, reps,
                                           split_seed(base, 0xa1u), threads);

        ExperimentReport report;
        report.n = n;
        report.method = "mc-quantile";
        report.reps = reps;
        report.seed = seed;
        {
            auto [omega, sigma] = expand_weights(h1, n);
            report.k = model_k(omega, sigma);
        }
        report.t_n = interpolated_quantile(calib, 1.0 - gamma1);
        int rejected0 = 0, rejected1 = 0;
        for (double v : h0_eval) rejected0 += (v > report.t_n) ? 1 : 0;
        for (double v : h1_eval) rejected1 += (v > report.t_n) ? 1 : 0;
        report.type1_rate = static_cast<double>(rejected0) / reps;
        report.power = static_cast<double>(rejected1) / reps;

        auto [t_opt, gamma_opt] = sweep_optimal_threshold(h0_eval, h1_eval);
        report.t_opt = t_opt;
        report.gamma_opt = gamma_opt;

        report.wall_time =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        reports.push_back(std::move(report));
    }
    return reports;
}

}  // namespace mixtest
