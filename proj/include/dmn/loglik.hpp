#pragma once

#include <span>

#include "dmn/types.hpp"

namespace dmn {

/// Dirichlet-multinomial log-likelihood kernel
///
///     log L(alpha; x) = sum_k sum_{j<x_k} log(alpha_k + j) - sum_{i<N} log(A + i)
///
/// evaluated as two compensated sums of logarithms. No gamma function is
/// involved: Gamma(a + x) / Gamma(a) is the rising factorial a (a+1) ... (a+x-1).
/// Categories are visited in a canonical order, so the result is bitwise
/// invariant under joint permutation of (alpha_k, x_k).
///
/// terms = N + sum_k x_k.
LogLikResult dmn_loglik_exact(const AlphaParams& alpha, const CountVector& x);

/// The same kernel through log-gamma:
/// lgamma(A) - lgamma(A + N) + sum_k [lgamma(alpha_k + x_k) - lgamma(alpha_k)].
/// terms = 2K + 2.
LogLikResult dmn_loglik_lgamma(const AlphaParams& alpha, const CountVector& x);

/// alpha_k = p_k (1 - phi) / phi. Throws DomainError at phi = 0, where alpha is
/// unbounded; use dmn_loglik_phi there.
AlphaParams params_from_mean_phi(const MeanPhiParams& mp);

/// Kernel in the (p, phi) parameterization:
///
///     sum_k sum_{j<x_k} log(p_k (1-phi) + j phi) - sum_{i<N} log((1-phi) + i phi)
///
/// Well defined at phi = 0, where it equals mn_loglik_kernel(p, x) bit for bit.
/// Returns kNegInf if some p_k = 0 has x_k > 0.
LogLikResult dmn_loglik_phi(const MeanPhiParams& mp, const CountVector& x);

/// sum_k x_k log p_k; categories with x_k = 0 contribute nothing even if p_k = 0.
double mn_loglik_kernel(std::span<const double> p, const CountVector& x);

/// log N! - sum_k log x_k!, as a sum of logs.
double log_multinomial_coefficient(const CountVector& x);

/// Full Dirichlet-multinomial log PMF.
double dmn_log_pmf(const AlphaParams& alpha, const CountVector& x);

/// Full multinomial log PMF.
double mn_log_pmf(std::span<const double> p, const CountVector& x);

namespace detail {

void check_dimensions(std::size_t params, std::size_t counts);
void check_total(const CountVector& x);

}  // namespace detail

}  // namespace dmn
