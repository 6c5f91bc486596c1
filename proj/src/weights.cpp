#include "mixtest/weights.hpp"

#include <cmath>
#include <string>

#include "mixtest/errors.hpp"

namespace mixtest {

namespace {
constexpr double kColumnSumTolerance = 1e-12;
}

WeightMatrix::WeightMatrix(Eigen::MatrixXd entries, bool renormalize)
    : entries_(std::move(entries)) {
    if (entries_.rows() < 1 || entries_.cols() < 1) {
        throw InvalidParam("WeightMatrix: empty matrix");
    }
    if (renormalize) {
        for (Eigen::Index i = 0; i < entries_.cols(); ++i) {
            const double sum = entries_.col(i).sum();
            if (sum <= 0.0) {
                throw WeightError("WeightMatrix: column " + std::to_string(i) +
                                  " has nonpositive sum");
            }
            entries_.col(i) /= sum;
        }
    }
    for (Eigen::Index i = 0; i < entries_.cols(); ++i) {
        for (Eigen::Index u = 0; u < entries_.rows(); ++u) {
            if (entries_(u, i) < 0.0) {
                throw WeightError("WeightMatrix: negative weight at component " +
                                  std::to_string(u) + ", observation " +
                                  std::to_string(i));
            }
        }
        const double sum = entries_.col(i).sum();
        if (std::fabs(sum - 1.0) > kColumnSumTolerance) {
            throw WeightError("WeightMatrix: column " + std::to_string(i) +
                              " sums to " + std::to_string(sum) + ", expected 1");
        }
    }
}

DualBasis::DualBasis(Eigen::MatrixXd vectors, const WeightMatrix& source)
    : vectors_(std::move(vectors)) {
    if (vectors_.rows() != source.components() || vectors_.cols() != source.size()) {
        throw DimensionMismatch("DualBasis: shape does not match source weights");
    }
}

double DualBasis::norm_sum() const {
    return vectors_.squaredNorm() / static_cast<double>(vectors_.cols());
}

GramSpectrum gram_spectrum(const WeightMatrix& w) {
    GramSpectrum out;
    out.gram = w.entries() * w.entries().transpose();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(out.gram);
    if (solver.info() != Eigen::Success) {
        throw NumericalFailure("gram_spectrum: eigensolver did not converge");
    }
    out.eigenvalues = solver.eigenvalues();  // ascending
    out.lambda_min = out.eigenvalues(0);
    out.k_single = out.lambda_min / static_cast<double>(w.size());
    return out;
}

double model_k(const WeightMatrix& omega, const WeightMatrix& sigma) {
    if (omega.components() != sigma.components() || omega.size() != sigma.size()) {
        throw DimensionMismatch("model_k: weight matrices disagree on M or n");
    }
    const double k = std::min(gram_spectrum(omega).k_single,
                              gram_spectrum(sigma).k_single);
    if (k <= kRankDeficientThreshold) {
        throw RankDeficient("model_k: smallest Gram eigenvalue is numerically zero");
    }
    return k;
}

DualBasis dual_basis(const WeightMatrix& w) {
    const GramSpectrum spectrum = gram_spectrum(w);
    if (spectrum.k_single <= kRankDeficientThreshold) {
        throw RankDeficient("dual_basis: weight Gram matrix is numerically singular");
    }
    // Gram * A = n * W; solve rather than invert, the Gram matrix can be
    // badly conditioned when the smallest eigenvalue is tiny.
    Eigen::MatrixXd rhs = static_cast<double>(w.size()) * w.entries();
    Eigen::MatrixXd vectors = spectrum.gram.ldlt().solve(rhs);
    return DualBasis(std::move(vectors), w);
}

}  // namespace mixtest
