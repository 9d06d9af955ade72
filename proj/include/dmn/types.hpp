#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dmn {

// Lengths of parameter and count vectors disagree.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A value lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// The request would cost more than the evaluators are willing to spend.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Count = std::int64_t;

/// Largest total count N accepted by the sum-of-logs evaluators (cost is O(N)).
inline constexpr Count kMaxTotalCount = Count{1} << 40;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Observed category counts x = (x_1, ..., x_K) and their total N.
class CountVector {
public:
    explicit CountVector(std::vector<Count> counts);
    CountVector(std::initializer_list<Count> counts) : CountVector(std::vector<Count>(counts)) {}

    std::span<const Count> counts() const noexcept { return counts_; }
    Count operator[](std::size_t k) const noexcept { return counts_[k]; }
    std::size_t size() const noexcept { return counts_.size(); }
    Count total() const noexcept { return total_; }

    /// Every count multiplied by `factor`.
    CountVector scaled(Count factor) const;

    friend bool operator==(const CountVector&, const CountVector&) = default;

private:
    std::vector<Count> counts_;
    Count total_ = 0;
};

/// Dirichlet concentration vector alpha with its cached sum A.
///
/// The sum is accumulated in ascending order with compensation and kept as an
/// unevaluated pair (sum, sum_residual), so A does not depend on the order in
/// which categories were supplied.
class AlphaParams {
public:
    explicit AlphaParams(std::vector<double> alpha);
    AlphaParams(std::initializer_list<double> alpha) : AlphaParams(std::vector<double>(alpha)) {}

    std::span<const double> alpha() const noexcept { return alpha_; }
    double operator[](std::size_t k) const noexcept { return alpha_[k]; }
    std::size_t size() const noexcept { return alpha_.size(); }
    double sum() const noexcept { return sum_; }
    // Low-order part of A that did not fit in sum().
    double sum_residual() const noexcept { return sum_residual_; }

private:
    std::vector<double> alpha_;
    double sum_ = 0.0;
    double sum_residual_ = 0.0;
};

/// Mean/over-dispersion parameterization: category probabilities p on the
/// simplex and phi in [0, 1). phi = 0 is the multinomial limit.
class MeanPhiParams {
public:
    static constexpr double kSimplexTolerance = 1e-12;

    /// Throws DomainError unless |sum(p) - 1| <= kSimplexTolerance. With
    /// `renormalize` set, p is divided by its sum instead.
    MeanPhiParams(std::vector<double> p, double phi, bool renormalize = false);

    std::span<const double> p() const noexcept { return p_; }
    std::size_t size() const noexcept { return p_.size(); }
    double phi() const noexcept { return phi_; }

private:
    std::vector<double> p_;
    double phi_ = 0.0;
};

enum class Method { Exact, LogGamma, PhiForm, MN };

std::string_view to_string(Method m) noexcept;

struct LogLikResult {
    double value = 0.0;  // natural log; kNegInf when the data are impossible
    Method method = Method::Exact;
    std::int64_t terms = 0;  // log / log-gamma evaluations performed
};

/// Validates a probability vector against the simplex tolerance. Used for the
/// bare-vector multinomial entry points.
void check_probability_vector(std::span<const double> p);

}  // namespace dmn
