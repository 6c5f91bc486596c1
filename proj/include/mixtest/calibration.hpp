#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "mixtest/simulation.hpp"
#include "mixtest/statistic.hpp"

namespace mixtest {

// Parameters the threshold and separation constants depend on.
struct ModelConstants {
    double radius = 2.0;        // R, the L2 / L_inf ball radius
    double half_support = 1.0;  // L
    double sup_norm_phi = 1.0;  // ||phi||_inf
    int components = 1;         // M
    double k = 0.0;             // smallest Gram eigenvalue over n
    double gamma = 0.1;         // target sum of error probabilities
    double s = 1.0;             // Besov smoothness
    double density_floor = 0.5; // C1; user-asserted, only the lower constant uses it
};

// Variance-bound constant C_T = max(2 Cbar_T, 4 Ctilde_T) assembled from the
// per-term constants k1, k2 and c31..c34.
double appendix_ct(double radius, double half_support, double sup_norm_phi);

// t * r_n^2 with t = (2 sqrt(C_T / gamma) + 8 L R^2) M / K.
double theoretical_threshold(const ModelConstants& constants, const RateParams& rate);

// C_gamma with C_gamma^2 = 2 ((1/K) sqrt(6 C_T / gamma) + R + t / M).
double upper_constant(const ModelConstants& constants);

// c_gamma with c_gamma^4 =
//   min(C1^2 / (L K^2) * ln(4 (1-gamma)^2 + 1), 2 R^2) * 2^{-4s} / (4 M^2).
double lower_constant(const ModelConstants& constants);

// Empirical (1 - gamma1)-quantile of the statistic over `reps` independent
// null datasets drawn from `model` (linear-interpolation quantile).
double mc_quantile_threshold(const MixtureSpec& model, int n, double s,
                             double gamma1, int reps, std::uint64_t seed,
                             unsigned threads = 0);

// Threshold minimizing empirical type-I + type-II over the merged statistic
// values; returns (t_opt, gamma_opt). Ties break toward the smaller threshold.
std::pair<double, double> optimal_sum_threshold(const MixtureSpec& h0,
                                                const MixtureSpec& h1, int n,
                                                double s, int reps,
                                                std::uint64_t seed,
                                                unsigned threads = 0);

// Heuristic threshold: bootstrap standard deviation of the statistic times
// the (1 - alpha) Gaussian quantile. Observations travel with their weight
// columns when resampled.
double bootstrap_threshold(const PairedSample& sample, double s, double alpha,
                           int resamples, std::uint64_t seed,
                           unsigned threads = 0);

struct ThresholdSpec {
    enum class Method { Theoretical, MCQuantile, OptimalSum, Bootstrap, Fixed };

    Method method = Method::MCQuantile;
    double gamma = 0.1;   // gamma (theoretical) or gamma1 (MC quantile)
    double alpha = 0.1;   // bootstrap
    int reps = 1000;
    int resamples = 200;
    std::uint64_t seed = 0;
    std::optional<MixtureSpec> calibration_model;  // MCQuantile / OptimalSum
    std::optional<MixtureSpec> alternative_model;  // OptimalSum
    std::optional<double> value;                   // resolved threshold
};

// Resolves the threshold for this sample and spec, then evaluates the test.
TestOutcome run_test(const PairedSample& sample, double s,
                     const ThresholdSpec& threshold, const ScalingBasis& basis,
                     double radius = 2.0, unsigned threads = 0);

}  // namespace mixtest
