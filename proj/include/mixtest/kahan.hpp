#pragma once

namespace mixtest {

// Compensated (Kahan) accumulator. The statistic forms S^2 - Q, a difference
// of large near-equal sums when n is large, so plain accumulation loses the
// digits that decide the test.
class KahanSum {
public:
    KahanSum() = default;
    explicit KahanSum(double init) : sum_(init) {}

    void add(double value) {
        const double y = value - compensation_;
        const double t = sum_ + y;
        compensation_ = (t - sum_) - y;
        sum_ = t;
    }

    KahanSum& operator+=(double value) {
        add(value);
        return *this;
    }

    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

}  // namespace mixtest
