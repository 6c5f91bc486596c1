#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace mixtest {

struct LevelIndex {
    int j = 0;      // resolution level
    long k = 0;     // translation

    friend bool operator<(const LevelIndex& a, const LevelIndex& b) {
        return std::pair(a.j, a.k) < std::pair(b.j, b.k);
    }
    friend bool operator==(const LevelIndex& a, const LevelIndex& b) {
        return a.j == b.j && a.k == b.k;
    }
};

// Compactly supported scaling function / wavelet pair. Both vanish outside
// [-half_support, half_support). Haar is the only built-in family; the enum
// leaves room for other compactly supported bases.
class ScalingBasis {
public:
    enum class Family { Haar };

    static ScalingBasis haar();

    Family family() const { return family_; }
    double half_support() const { return half_support_; }   // L
    double sup_norm_phi() const { return sup_norm_phi_; }   // ||phi||_inf

    double phi(double x) const;
    double psi(double x) const;

private:
    explicit ScalingBasis(Family family);

    Family family_;
    double half_support_;
    double sup_norm_phi_;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;  // half-open [lo, hi)
};

// Finitely supported array of wavelet coefficients indexed by (level, shift).
struct CoefficientArray {
    std::map<LevelIndex, double> levels;

    void set(int j, long k, double value) { levels[{j, k}] = value; }
};

// phi_{jk}(x) = 2^{j/2} phi(2^j x - k)
double eval_phi_jk(const ScalingBasis& basis, LevelIndex idx, double x);

// psi_{jk}(x) = 2^{j/2} psi(2^j x - k)
double eval_psi_jk(const ScalingBasis& basis, LevelIndex idx, double x);

// I_{jk} = [(k-L)/2^j, (k+L)/2^j)
Interval support_interval(const ScalingBasis& basis, LevelIndex idx);

// All k with phi_{jk}(x) != 0; at most 2L entries.
std::vector<long> active_translates(const ScalingBasis& basis, int j, double x);

// Number of k' whose support interval I_{jk'} overlaps I_{jk}; < 4L always.
int overlap_count(const ScalingBasis& basis, int j, long k);

// sup over levels j of 2^{2js} * (sum of squared coefficients at levels >= j).
// Membership in the Besov ball of radius R holds iff the result is <= R.
// The sup runs over the levels present in the array plus j = 0.
double besov_tail_seminorm(const CoefficientArray& coeffs, double s);

}  // namespace mixtest
