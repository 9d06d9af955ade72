#include "dmn/loglik.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "dmn/compensated_sum.hpp"

namespace dmn {

namespace detail {

void check_dimensions(std::size_t params, std::size_t counts) {
    if (params != counts) {
        throw DimensionError("parameter vector has " + std::to_string(params) +
                             " categories but count vector has " + std::to_string(counts));
    }
}

void check_total(const CountVector& x) {
    if (x.total() > kMaxTotalCount) {
        throw ResourceError("total count " + std::to_string(x.total()) +
                            " exceeds the evaluator limit of 2^40");
    }
}

}  // namespace detail

namespace {

double log_gamma(double v) {
#if defined(__GLIBC__)
    int sign = 0;
    return ::lgamma_r(v, &sign);
#else
    return std::lgamma(v);
#endif
}

// Adds sum_{j<count} log((head + tail) + j), where head + tail is an
// unevaluated sum. Each argument is formed without rounding error: the part of
// head + j that does not fit in a double enters as a first-order log correction.
std::int64_t add_log_rising(NeumaierSum& acc, double head, double tail, Count count) {
    for (Count j = 0; j < count; ++j) {
        const TwoSum arg = two_sum(head, static_cast<double>(j));
        const double low = arg.err + tail;
        acc.add(std::log(arg.sum));
        if (low != 0.0) acc.add_residue(low / arg.sum);
    }
    return count;
}

// Adds sum_{j<count} log(base + j * step). A zero step collapses the sum to
// count * log(base).
std::int64_t add_log_affine(NeumaierSum& acc, double base, double step, Count count) {
    if (count == 0) return 0;
    if (step == 0.0) {
        acc.add(static_cast<double>(count) * std::log(base));
        return 1;
    }
    for (Count j = 0; j < count; ++j) {
        acc.add(std::log(base + static_cast<double>(j) * step));
    }
    return count;
}

// Category visiting order that depends only on the multiset of (alpha_k, x_k).
std::vector<std::size_t> canonical_order(const AlphaParams& alpha, const CountVector& x) {
    std::vector<std::size_t> order(alpha.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (alpha[a] != alpha[b]) return alpha[a] < alpha[b];
        return x[a] < x[b];
    });
    return order;
}

// Sum of log i for i = 2..n.
void add_log_factorial(NeumaierSum& acc, Count n) {
    for (Count i = 2; i <= n; ++i) acc.add(std::log(static_cast<double>(i)));
}

bool impossible_category(std::span<const double> p, const CountVector& x) {
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] == 0.0 && x[k] > 0) return true;
    }
    return false;
}

}  // namespace

LogLikResult dmn_loglik_exact(const AlphaParams& alpha, const CountVector& x) {
    detail::check_dimensions(alpha.size(), x.size());
    detail::check_total(x);

    NeumaierSum rising;
    NeumaierSum total;
    std::int64_t terms = 0;
    for (std::size_t k : canonical_order(alpha, x)) {
        terms += add_log_rising(rising, alpha[k], 0.0, x[k]);
    }
    terms += add_log_rising(total, alpha.sum(), alpha.sum_residual(), x.total());
    return {difference(rising, total), Method::Exact, terms};
}

LogLikResult dmn_loglik_lgamma(const AlphaParams& alpha, const CountVector& x) {
    detail::check_dimensions(alpha.size(), x.size());

    const double a = alpha.sum();
    double value = log_gamma(a) - log_gamma(a + static_cast<double>(x.total()));
    for (std::size_t k = 0; k < alpha.size(); ++k) {
        value += log_gamma(alpha[k] + static_cast<double>(x[k])) - log_gamma(alpha[k]);
    }
    return {value, Method::LogGamma, 2 * static_cast<std::int64_t>(alpha.size()) + 2};
}

AlphaParams params_from_mean_phi(const MeanPhiParams& mp) {
    if (mp.phi() == 0.0) {
        throw DomainError(
            "phi = 0 has no finite alpha (it is the multinomial limit); "
            "evaluate it with the phi-form log-likelihood instead");
    }
    const double scale = (1.0 - mp.phi()) / mp.phi();
    std::vector<double> alpha(mp.size());
    for (std::size_t k = 0; k < mp.size(); ++k) {
        alpha[k] = mp.p()[k] * scale;
    }
    return AlphaParams(std::move(alpha));
}

LogLikResult dmn_loglik_phi(const MeanPhiParams& mp, const CountVector& x) {
    detail::check_dimensions(mp.size(), x.size());
    detail::check_total(x);

    if (impossible_category(mp.p(), x)) return {kNegInf, Method::PhiForm, 0};

    const double phi = mp.phi();
    const double keep = 1.0 - phi;
    NeumaierSum rising;
    NeumaierSum total;
    std::int64_t terms = 0;
    for (std::size_t k = 0; k < mp.size(); ++k) {
        terms += add_log_affine(rising, mp.p()[k] * keep, phi, x[k]);
    }
    terms += add_log_affine(total, keep, phi, x.total());
    return {difference(rising, total), Method::PhiForm, terms};
}

double mn_loglik_kernel(std::span<const double> p, const CountVector& x) {
    check_probability_vector(p);
    detail::check_dimensions(p.size(), x.size());

    if (impossible_category(p, x)) return kNegInf;
    NeumaierSum acc;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (x[k] == 0) continue;
        acc.add(static_cast<double>(x[k]) * std::log(p[k]));
    }
    return acc.result();
}

double log_multinomial_coefficient(const CountVector& x) {
    detail::check_total(x);
    NeumaierSum numerator;
    NeumaierSum denominator;
    add_log_factorial(numerator, x.total());
    for (Count c : x.counts()) add_log_factorial(denominator, c);
    return difference(numerator, denominator);
}

double dmn_log_pmf(const AlphaParams& alpha, const CountVector& x) {
    const LogLikResult kernel = dmn_loglik_exact(alpha, x);
    return log_multinomial_coefficient(x) + kernel.value;
}

double mn_log_pmf(std::span<const double> p, const CountVector& x) {
    const double kernel = mn_loglik_kernel(p, x);
    if (kernel == kNegInf) return kNegInf;
    return log_multinomial_coefficient(x) + kernel;
}

}  // namespace dmn
