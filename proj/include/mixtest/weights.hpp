#pragma once

#include <Eigen/Dense>

namespace mixtest {

// Known mixing weights: row u = component, column i = observation.
// Every entry is nonnegative and every column sums to 1.
class WeightMatrix {
public:
    // Validates nonnegativity and column-stochasticity (tolerance 1e-12).
    // With renormalize = true, columns are rescaled to sum exactly to 1
    // before validation; intended for values that round-tripped through CSV.
    explicit WeightMatrix(Eigen::MatrixXd entries, bool renormalize = false);

    int components() const { return static_cast<int>(entries_.rows()); }  // M
    int size() const { return static_cast<int>(entries_.cols()); }        // n

    const Eigen::MatrixXd& entries() const { return entries_; }
    double weight(int component, int observation) const {
        return entries_(component, observation);
    }

private:
    Eigen::MatrixXd entries_;
};

// Spectrum of the Gram matrix of a weight design.
struct GramSpectrum {
    Eigen::MatrixXd gram;          // W W^T, M x M
    Eigen::VectorXd eigenvalues;   // ascending
    double lambda_min = 0.0;
    double k_single = 0.0;         // lambda_min / n
};

// Dual vectors: row l satisfies (1/n) sum_i w_k(i) a_l(i) = delta_kl.
class DualBasis {
public:
    DualBasis(Eigen::MatrixXd vectors, const WeightMatrix& source);

    int components() const { return static_cast<int>(vectors_.rows()); }
    int size() const { return static_cast<int>(vectors_.cols()); }
    const Eigen::MatrixXd& vectors() const { return vectors_; }
    double at(int l, int i) const { return vectors_(l, i); }

    // (1/n) sum_l sum_i a_l(i)^2
    double norm_sum() const;

private:
    Eigen::MatrixXd vectors_;
};

GramSpectrum gram_spectrum(const WeightMatrix& w);

// min(lambda_min(Omega Omega^T), lambda_min(Sigma Sigma^T)) / n.
// Throws RankDeficient when the result drops to the numerical-noise floor
// (<= 1e-12), i.e. the design violates the eigenvalue hypothesis.
double model_k(const WeightMatrix& omega, const WeightMatrix& sigma);

// Solves Gram * A = n * W for the dual vectors.
DualBasis dual_basis(const WeightMatrix& w);

inline constexpr double kRankDeficientThreshold = 1e-12;

}  // namespace mixtest
