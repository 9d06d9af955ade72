#include "dmn/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "dmn/compensated_sum.hpp"
#include "dmn/loglik.hpp"

namespace dmn {

namespace {

constexpr double kMonotoneSlack = 1e-10;

// Runs fn(i) for every i in [0, n), splitting the range over worker threads.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>(threads, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([=, &fn] {
            for (std::size_t i = begin; i < end; ++i) fn(i);
        });
    }
}

void check_dataset(const AlphaParams& alpha, const Dataset& d) {
    if (alpha.size() != d.categories()) {
        throw DimensionError("alpha has " + std::to_string(alpha.size()) +
                             " categories but the dataset has " + std::to_string(d.categories()));
    }
}

// sum_{j<n} 1/(a + j)
void add_reciprocals(NeumaierSum& acc, double a, Count n) {
    for (Count j = 0; j < n; ++j) acc.add(1.0 / (a + static_cast<double>(j)));
}

// survival[j] = number of observations whose value exceeds j.
std::vector<double> survival_counts(std::span<const Count> values) {
    Count top = 0;
    for (Count v : values) top = std::max(top, v);
    std::vector<double> hist(static_cast<std::size_t>(top) + 1, 0.0);
    for (Count v : values) hist[static_cast<std::size_t>(v)] += 1.0;
    std::vector<double> survival(static_cast<std::size_t>(top), 0.0);
    double above = 0.0;
    for (Count j = top; j-- > 0;) {
        above += hist[static_cast<std::size_t>(j) + 1];
        survival[static_cast<std::size_t>(j)] = above;
    }
    return survival;
}

// The dataset reduced to survival histograms: every sum over observations of
// sum_{j<x} f(a + j) becomes sum_j survival[j] f(a + j).
struct PooledCounts {
    std::vector<std::vector<double>> per_category;
    std::vector<double> totals;

    explicit PooledCounts(const Dataset& d) {
        const std::size_t K = d.categories();
        std::vector<Count> column(d.size());
        for (std::size_t k = 0; k < K; ++k) {
            for (std::size_t i = 0; i < d.size(); ++i) column[i] = d.observations()[i][k];
            per_category.push_back(survival_counts(column));
        }
        for (std::size_t i = 0; i < d.size(); ++i) column[i] = d.observations()[i].total();
        totals = survival_counts(column);
    }

    static double weighted_reciprocals(const std::vector<double>& survival, double a) {
        NeumaierSum acc;
        for (std::size_t j = 0; j < survival.size(); ++j) {
            acc.add(survival[j] / (a + static_cast<double>(j)));
        }
        return acc.result();
    }

    double loglik(std::span<const double> alpha, double sum_alpha) const {
        NeumaierSum rising;
        NeumaierSum total;
        for (std::size_t k = 0; k < alpha.size(); ++k) {
            const auto& s = per_category[k];
            for (std::size_t j = 0; j < s.size(); ++j) {
                rising.add(s[j] * std::log(alpha[k] + static_cast<double>(j)));
            }
        }
        for (std::size_t i = 0; i < totals.size(); ++i) {
            total.add(totals[i] * std::log(sum_alpha + static_cast<double>(i)));
        }
        return difference(rising, total);
    }
};

double max_relative_change(std::span<const double> before, std::span<const double> after) {
    double worst = 0.0;
    for (std::size_t k = 0; k < before.size(); ++k) {
        worst = std::max(worst, std::fabs(after[k] - before[k]) / before[k]);
    }
    return worst;
}

}  // namespace

Dataset::Dataset(std::vector<CountVector> observations) : observations_(std::move(observations)) {
    if (observations_.empty()) {
        throw DimensionError("dataset needs at least one observation");
    }
    const std::size_t K = observations_.front().size();
    for (std::size_t i = 1; i < observations_.size(); ++i) {
        if (observations_[i].size() != K) {
            throw DimensionError("observation " + std::to_string(i) + " has " +
                                 std::to_string(observations_[i].size()) + " categories, expected " +
                                 std::to_string(K));
        }
    }
}

double loglik_dataset(const AlphaParams& alpha, const Dataset& d, unsigned threads) {
    check_dataset(alpha, d);
    for (const CountVector& x : d.observations()) detail::check_total(x);
    std::vector<double> values(d.size());
    parallel_for(d.size(), threads,
                 [&](std::size_t i) { values[i] = dmn_loglik_exact(alpha, d.observations()[i]).value; });
    NeumaierSum acc;
    for (double v : values) acc.add(v);
    return acc.result();
}

std::vector<double> grad_loglik(const AlphaParams& alpha, const Dataset& d, unsigned threads) {
    check_dataset(alpha, d);
    for (const CountVector& x : d.observations()) detail::check_total(x);

    const std::size_t K = alpha.size();
    const double A = alpha.sum();
    std::vector<double> per_obs(d.size() * K);
    parallel_for(d.size(), threads, [&](std::size_t i) {
        const CountVector& x = d.observations()[i];
        NeumaierSum shared;
        add_reciprocals(shared, A, x.total());
        for (std::size_t k = 0; k < K; ++k) {
            NeumaierSum own;
            add_reciprocals(own, alpha[k], x[k]);
            per_obs[i * K + k] = difference(own, shared);
        }
    });

    std::vector<double> grad(K);
    for (std::size_t k = 0; k < K; ++k) {
        NeumaierSum acc;
        for (std::size_t i = 0; i < d.size(); ++i) acc.add(per_obs[i * K + k]);
        grad[k] = acc.result();
    }
    return grad;
}

FitResult fit_alpha_mle(const Dataset& d, const FitOptions& options) {
    const std::size_t K = d.categories();
    if (K < 2) {
        throw DomainError("cannot fit a single-category dataset: its likelihood does not depend on alpha");
    }
    if (!(options.alpha_floor > 0.0)) throw DomainError("alpha floor must be positive");
    if (options.max_iter < 0) throw DomainError("max_iter must be non-negative");

    std::vector<double> pooled(K, 0.0);
    double grand_total = 0.0;
    for (const CountVector& x : d.observations()) {
        detail::check_total(x);
        for (std::size_t k = 0; k < K; ++k) pooled[k] += static_cast<double>(x[k]);
        grand_total += static_cast<double>(x.total());
    }
    if (grand_total == 0.0) {
        throw DomainError("dataset contains no counts; alpha is not identifiable");
    }

    std::vector<std::size_t> floored;
    for (std::size_t k = 0; k < K; ++k) {
        if (pooled[k] == 0.0) floored.push_back(k);
    }

    std::vector<double> alpha(K);
    if (options.init) {
        if (options.init->size() != K) {
            throw DimensionError("initial alpha has " + std::to_string(options.init->size()) +
                                 " categories but the dataset has " + std::to_string(K));
        }
        alpha.assign(options.init->alpha().begin(), options.init->alpha().end());
    } else {
        for (std::size_t k = 0; k < K; ++k) {
            alpha[k] = std::max(options.alpha_floor, static_cast<double>(K) * pooled[k] / grand_total);
        }
    }
    for (std::size_t k : floored) alpha[k] = options.alpha_floor;

    const PooledCounts pool(d);
    auto sum_of = [](std::span<const double> a) {
        NeumaierSum acc;
        for (double v : a) acc.add(v);
        return acc.result();
    };

    FitResult result{AlphaParams(alpha), 0.0, 0, false, floored, {}};
    double current = pool.loglik(alpha, sum_of(alpha));
    result.trace.push_back({0, current});

    std::vector<double> next(K);
    for (int iter = 1; iter <= options.max_iter; ++iter) {
        const double denominator = PooledCounts::weighted_reciprocals(pool.totals, sum_of(alpha));
        for (std::size_t k = 0; k < K; ++k) {
            const double numerator = PooledCounts::weighted_reciprocals(pool.per_category[k], alpha[k]);
            next[k] = std::max(options.alpha_floor, alpha[k] * numerator / denominator);
        }
        const double candidate = pool.loglik(next, sum_of(next));
        if (!std::isfinite(candidate) || candidate < current - kMonotoneSlack) {
            // Only reachable through rounding once the ascent has stalled.
            break;
        }
        const double change = max_relative_change(alpha, next);
        alpha.swap(next);
        current = candidate;
        result.iterations = iter;
        result.trace.push_back({iter, current});
        if (change <= options.tol) {
            result.converged = true;
            break;
        }
    }

    result.alpha_hat = AlphaParams(alpha);
    result.loglik = loglik_dataset(result.alpha_hat, d, options.threads);
    return result;
}

}  // namespace dmn
