#include "mixtest/wavelet.hpp"

#include <algorithm>
#include <cmath>

#include "mixtest/kahan.hpp"

namespace mixtest {

ScalingBasis::ScalingBasis(Family family) : family_(family) {
    switch (family) {
        case Family::Haar:
            // support(phi) = support(psi) = [0,1) c [-1,1)
            half_support_ = 1.0;
            sup_norm_phi_ = 1.0;
            break;
    }
}

ScalingBasis ScalingBasis::haar() {
    return ScalingBasis(Family::Haar);
}

double ScalingBasis::phi(double x) const {
    return (x >= 0.0 && x < 1.0) ? 1.0 : 0.0;
}

double ScalingBasis::psi(double x) const {
    if (x >= 0.0 && x < 0.5) return 1.0;
    if (x >= 0.5 && x < 1.0) return -1.0;
    return 0.0;
}

double eval_phi_jk(const ScalingBasis& basis, LevelIndex idx, double x) {
    const double scale = std::ldexp(1.0, idx.j);  // 2^j
    return std::sqrt(scale) * basis.phi(scale * x - static_cast<double>(idx.k));
}

double eval_psi_jk(const ScalingBasis& basis, LevelIndex idx, double x) {
    const double scale = std::ldexp(1.0, idx.j);
    return std::sqrt(scale) * basis.psi(scale * x - static_cast<double>(idx.k));
}

Interval support_interval(const ScalingBasis& basis, LevelIndex idx) {
    const double scale = std::ldexp(1.0, idx.j);
    const double l = basis.half_support();
    return {(static_cast<double>(idx.k) - l) / scale,
            (static_cast<double>(idx.k) + l) / scale};
}

std::vector<long> active_translates(const ScalingBasis& basis, int j, double x) {
    const double scale = std::ldexp(1.0, j);
    const double t = scale * x;
    const long center = static_cast<long>(std::floor(t));
    const long radius = static_cast<long>(std::ceil(2.0 * basis.half_support()));

    std::vector<long> out;
    for (long k = center - radius; k <= center + radius; ++k) {
        if (basis.phi(t - static_cast<double>(k)) != 0.0) out.push_back(k);
    }
    return out;
}

int overlap_count(const ScalingBasis& basis, int j, long k) {
    // I_{jk} and I_{jk'} overlap iff k - 2L < k' < k + 2L; scale-free.
    (void)j;
    const double l = basis.half_support();
    int count = 0;
    const long radius = static_cast<long>(std::ceil(2.0 * l)) + 1;
    for (long kp = k - radius; kp <= k + radius; ++kp) {
        if (static_cast<double>(kp) > static_cast<double>(k) - 2.0 * l &&
            static_cast<double>(kp) < static_cast<double>(k) + 2.0 * l) {
            ++count;
        }
    }
    return count;
}

double besov_tail_seminorm(const CoefficientArray& coeffs, double s) {
    if (coeffs.levels.empty()) return 0.0;

    int max_level = 0;
    std::map<int, double> energy;  // level -> sum of squared coefficients
    for (const auto& [idx, value] : coeffs.levels) {
        energy[idx.j] += value * value;
        max_level = std::max(max_level, idx.j);
    }

    double best = 0.0;
    for (int j = 0; j <= max_level; ++j) {
        KahanSum tail;
        for (const auto& [level, e] : energy) {
            if (level >= j) tail += e;
        }
        best = std::max(best, std::pow(2.0, 2.0 * j * s) * tail.value());
    }
    return best;
}

}  // namespace mixtest
