#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mixtest/rng.hpp"
#include "mixtest/statistic.hpp"
#include "mixtest/wavelet.hpp"
#include "mixtest/weights.hpp"

namespace mixtest {

// A mixture component with density evaluation and inverse-CDF sampling.
class ComponentDist {
public:
    enum class Kind { Normal, Uniform };

    static ComponentDist normal(double mean, double variance);
    static ComponentDist uniform(double lo, double hi);

    Kind kind() const { return kind_; }
    double density(double x) const;
    double sample(Rng& rng) const;  // inverse-CDF from the uniform stream

    double mean() const;
    double l2_norm() const;    // ||p||_2
    double sup_norm() const;   // ||p||_inf

private:
    ComponentDist(Kind kind, double a, double b);
    Kind kind_;
    double a_, b_;  // mean/variance or lo/hi
};

// One contiguous run of observations sharing a weight vector.
struct WeightBlock {
    double fraction = 0.0;            // in (0,1]; fractions sum to 1
    std::vector<double> weights;      // M entries summing to 1
};

// Full data-generating process for a paired two-sample experiment.
// The sample size is supplied when the spec is materialized, so one spec
// serves a whole grid of n values.
struct MixtureSpec {
    std::vector<ComponentDist> components_p;  // for Y
    std::vector<ComponentDist> components_q;  // for Z
    std::vector<WeightBlock> y_blocks;
    std::vector<WeightBlock> z_blocks;

    int components() const { return static_cast<int>(components_p.size()); }
};

struct ExperimentReport {
    int n = 0;
    double k = 0.0;
    std::string method;
    double t_n = 0.0;
    double type1_rate = 0.0;
    double power = 0.0;
    double gamma_opt = 0.0;
    double t_opt = 0.0;
    int reps = 0;
    std::uint64_t seed = 0;
    double wall_time = 0.0;  // seconds
};

// Materializes the M x n weight matrices. Each block occupies
// floor(fraction * n) columns; the last block absorbs the remainder.
std::pair<WeightMatrix, WeightMatrix> expand_weights(const MixtureSpec& spec, int n);

// Draws one paired sample: per observation a component index with the
// column's weights, then a value from that component. Replayable by seed.
PairedSample sample_mixture(const MixtureSpec& spec, int n, std::uint64_t seed);

// Named models: model{1,2,3}_{h0,h1} plus the two illustration mixtures.
const std::map<std::string, MixtureSpec>& builtin_models();

// Calibrates t_n on h0, estimates power on h1, and finds the threshold
// minimizing the summed error rates, for each n. One report per n.
std::vector<ExperimentReport> run_power_study(const MixtureSpec& h0,
                                              const MixtureSpec& h1,
                                              const std::vector<int>& n_list,
                                              double s, double gamma1, int reps,
                                              std::uint64_t seed,
                                              unsigned threads = 0);

// Least-detectable alternative: p_l plus signed wavelet bumps along the
// weight direction theta that the design separates worst.
struct AdversarialAlternative {
    std::vector<ComponentDist> base;   // p_l
    Eigen::VectorXd theta;             // unit eigenvector for lambda_min
    std::vector<long> translate_set;   // disjoint bump positions in [0,1)
    std::vector<int> signs;            // +1 / -1 per bump
    int level = 0;                     // j_n
    double bump_scale = 0.0;           // 2^{s+1} C sqrt(ML) 2^{-j_n s - j_n/2}
    double separation = 0.0;           // the constant C
    double smoothness = 0.0;           // s
    ScalingBasis basis;

    double perturbation(double z) const;             // shared bump sum (unit theta)
    double density(int component, double z) const;   // q_{l,zeta}(z)
    double closed_form_l2_sq(int component) const;   // ||p_l - q_l||_2^2
    CoefficientArray perturbation_coefficients(int component) const;
};

AdversarialAlternative adversarial_alternative(
    const std::vector<ComponentDist>& components, const WeightMatrix& sigma,
    double c, double s, int n, const ScalingBasis& basis, std::uint64_t seed,
    double radius = 2.0, double density_floor = 0.0);

}  // namespace mixtest
