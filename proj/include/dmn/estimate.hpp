#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dmn/types.hpp"

namespace dmn {

/// Independent count vectors over the same K categories.
class Dataset {
public:
    explicit Dataset(std::vector<CountVector> observations);

    std::span<const CountVector> observations() const noexcept { return observations_; }
    std::size_t size() const noexcept { return observations_.size(); }
    std::size_t categories() const noexcept { return observations_.front().size(); }

private:
    std::vector<CountVector> observations_;
};

/// Sum of dmn_loglik_exact over observations. Per-observation values may be
/// computed on `threads` workers (0 = hardware concurrency); they are always
/// reduced in observation order, so the result does not depend on `threads`.
double loglik_dataset(const AlphaParams& alpha, const Dataset& d, unsigned threads = 1);

/// Gradient of loglik_dataset with respect to alpha:
/// sum_obs [ sum_{j<x_k} 1/(alpha_k + j) - sum_{i<N} 1/(A + i) ].
std::vector<double> grad_loglik(const AlphaParams& alpha, const Dataset& d, unsigned threads = 1);

struct FitOptions {
    std::optional<AlphaParams> init;  // default: pooled frequencies scaled to A = K
    int max_iter = 1000;
    double tol = 1e-8;                // on max_k |delta alpha_k| / alpha_k
    double alpha_floor = 1e-8;        // for categories never observed
    unsigned threads = 1;
};

struct TracePoint {
    int iteration = 0;
    double loglik = 0.0;
};

struct FitResult {
    AlphaParams alpha_hat;
    double loglik = 0.0;  // loglik_dataset(alpha_hat, d)
    int iterations = 0;
    bool converged = false;
    std::vector<std::size_t> floored;  // categories pinned at alpha_floor
    // Iteration 0 is the starting point. Values come from the pooled count
    // histograms and agree with loglik_dataset to rounding.
    std::vector<TracePoint> trace;
};

/// Maximum-likelihood alpha by the multiplicative fixed-point update
///
///     alpha_k <- alpha_k * sum_obs sum_{j<x_k} 1/(alpha_k + j)
///                        / sum_obs sum_{i<N} 1/(A + i)
///
/// which never decreases the likelihood. Throws DomainError for K = 1 or for
/// a dataset with no counts at all.
FitResult fit_alpha_mle(const Dataset& d, const FitOptions& options = {});

}  // namespace dmn
