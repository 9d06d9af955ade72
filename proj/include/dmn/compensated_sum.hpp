#pragma once

#include <cmath>

namespace dmn {

/// Error-free transformation: a + b == sum + err exactly (Knuth's TwoSum).
struct TwoSum {
    double sum;
    double err;
};

inline TwoSum two_sum(double a, double b) noexcept {
    const double s = a + b;
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

/// Neumaier's variant of Kahan summation. The running sum and the collected
/// rounding residue are kept apart until result().
class NeumaierSum {
public:
    void add(double v) noexcept {
        const double t = sum_ + v;
        if (std::fabs(sum_) >= std::fabs(v)) {
            residue_ += (sum_ - t) + v;
        } else {
            residue_ += (v - t) + sum_;
        }
        sum_ = t;
    }

    // For corrections known to be far below one ulp of the running sum.
    void add_residue(double v) noexcept { residue_ += v; }

    double sum() const noexcept { return sum_; }
    double residue() const noexcept { return residue_; }
    double result() const noexcept { return sum_ + residue_; }

private:
    double sum_ = 0.0;
    double residue_ = 0.0;
};

/// a - b for two compensated sums, rounded once. Identical inputs give +0.
inline double difference(const NeumaierSum& a, const NeumaierSum& b) noexcept {
    const TwoSum head = two_sum(a.sum(), -b.sum());
    return head.sum + (head.err + (a.residue() - b.residue()));
}

}  // namespace dmn
