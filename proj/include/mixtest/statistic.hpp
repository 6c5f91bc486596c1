#pragma once

#include <map>
#include <string>
#include <vector>

#include "mixtest/wavelet.hpp"
#include "mixtest/weights.hpp"

namespace mixtest {

// The two observation vectors with their per-observation weight designs.
struct PairedSample {
    std::vector<double> y;
    std::vector<double> z;
    WeightMatrix omega;  // weights for Y
    WeightMatrix sigma;  // weights for Z

    PairedSample(std::vector<double> y_in, std::vector<double> z_in,
                 WeightMatrix omega_in, WeightMatrix sigma_in);

    int size() const { return static_cast<int>(y.size()); }       // n
    int components() const { return omega.components(); }          // M
};

// Level and separation rate for a given smoothness s and sample size n.
struct RateParams {
    double s = 0.0;
    int n = 0;
    int level = 0;     // j_n: smallest integer with 2^{-j} <= n^{-2/(1+4s)}
    double rate = 0.0; // r_n = n^{-2s/(1+4s)}
};

RateParams select_level(int n, double s);

// Reference evaluation of the pairwise statistic: the full double sum over
// ordered pairs i1 != i2, components l, and active translates k. O(n^2 M).
double statistic_naive(const PairedSample& sample, const DualBasis& a,
                       const DualBasis& b, const ScalingBasis& basis, int level);

// Same value via sum-of-squares identity: sum_{i1 != i2} u_{i1} u_{i2}
// = (sum_i u_i)^2 - sum_i u_i^2 per (l,k). O(n M) for Haar.
double statistic_fast(const PairedSample& sample, const DualBasis& a,
                      const DualBasis& b, const ScalingBasis& basis, int level);

struct TestOutcome {
    double t_j = 0.0;
    int level = 0;
    double threshold = 0.0;
    bool reject = false;
    double k = 0.0;  // model K
    std::map<std::string, double> diagnostics;
};

// Evaluates the statistic at level j_n against a resolved threshold and
// fills the diagnostic bounds (bias bound 8LMR^2/(Kn), null variance bound
// C_T M^2 2^j / (K^2 n^2)). Threshold resolution lives in the calibration
// layer; see run_test in calibration.hpp.
TestOutcome evaluate_test(const PairedSample& sample, double s, double threshold,
                          const ScalingBasis& basis, double radius, double c_t);

// Levels above this would need unbounded per-translate state.
inline constexpr int kMaxLevel = 20;

}  // namespace mixtest
