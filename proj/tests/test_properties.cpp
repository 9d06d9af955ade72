// Randomized invariants of the log-likelihood evaluators.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dmn/loglik.hpp"
#include "support/oracles.hpp"
#include "support/sampler.hpp"

using namespace dmn;
using dmn::testing::Random;

TEST_CASE("exact agrees with the log-gamma route") {
    Random rng(1);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto K = static_cast<std::size_t>(rng.integer(1, 10));
        const auto alpha = rng.alpha(K, 0.01, 100.0);
        const auto x = rng.composition(K, rng.integer(0, 2000));
        const double exact = dmn_loglik_exact(AlphaParams(alpha), CountVector(x)).value;
        const double oracle = dmn::testing::lgamma_kernel(alpha, x);
        REQUIRE_FALSE(std::isnan(exact));
        CHECK(std::fabs(exact - oracle) <= 1e-8 * std::max(1.0, std::fabs(exact)));
    }
}

TEST_CASE("exact agrees with the direct product on small counts") {
    Random rng(2);
    for (int trial = 0; trial < 500; ++trial) {
        const auto K = static_cast<std::size_t>(rng.integer(1, 5));
        const auto alpha = rng.alpha(K, 0.05, 20.0);
        const auto x = rng.composition(K, rng.integer(0, 30));
        const double exact = dmn_loglik_exact(AlphaParams(alpha), CountVector(x)).value;
        CHECK(exact == doctest::Approx(dmn::testing::product_kernel(alpha, x)).epsilon(1e-13));
    }
}

TEST_CASE("one more count in category k adds log(alpha_k + x_k) - log(A + N)") {
    Random rng(3);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto K = static_cast<std::size_t>(rng.integer(1, 10));
        const AlphaParams alpha(rng.alpha(K, 0.01, 100.0));
        auto counts = rng.composition(K, rng.integer(0, 300));
        const auto k = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(K) - 1));
        const CountVector x(counts);
        ++counts[k];
        const CountVector x_next(counts);

        const double step = std::log(alpha[k] + static_cast<double>(x[k])) -
                            std::log(alpha.sum() + static_cast<double>(x.total()));
        const double before = dmn_loglik_exact(alpha, x).value;
        const double after = dmn_loglik_exact(alpha, x_next).value;
        CHECK(std::fabs(after - (before + step)) <= 1e-12);
    }
}

TEST_CASE("joint permutation of (alpha_k, x_k) is bitwise invariant") {
    Random rng(4);
    for (int trial = 0; trial < 500; ++trial) {
        const auto K = static_cast<std::size_t>(rng.integer(2, 10));
        auto alpha = rng.alpha(K, 0.01, 100.0);
        auto x = rng.composition(K, rng.integer(0, 500));
        if (trial % 5 == 0) alpha[1] = alpha[0];  // ties in alpha
        const double original = dmn_loglik_exact(AlphaParams(alpha), CountVector(x)).value;

        std::vector<std::size_t> perm(K);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), rng.engine());
        std::vector<double> alpha_p(K);
        std::vector<Count> x_p(K);
        for (std::size_t i = 0; i < K; ++i) {
            alpha_p[i] = alpha[perm[i]];
            x_p[i] = x[perm[i]];
        }
        CHECK(dmn_loglik_exact(AlphaParams(alpha_p), CountVector(x_p)).value == original);
    }
}

TEST_CASE("single category is exactly zero") {
    Random rng(5);
    for (int trial = 0; trial < 500; ++trial) {
        const double a = rng.log_uniform(1e-4, 1e4);
        const Count n = rng.integer(0, 5000);
        CHECK(dmn_loglik_exact({a}, CountVector{n}).value == 0.0);
    }
}

TEST_CASE("phi form matches the alpha form for phi in (0, 1)") {
    Random rng(6);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto K = static_cast<std::size_t>(rng.integer(1, 8));
        const double phi = rng.log_uniform(1e-6, 0.99);
        const MeanPhiParams mp(rng.simplex(K, 0.01), phi, true);
        const CountVector x(rng.composition(K, rng.integer(0, 1000)));
        const double phi_form = dmn_loglik_phi(mp, x).value;
        const double alpha_form = dmn_loglik_exact(params_from_mean_phi(mp), x).value;
        CHECK(std::fabs(phi_form - alpha_form) <= 1e-9 * std::max(1.0, std::fabs(alpha_form)));
    }
}

TEST_CASE("phi form at phi = 0 is the multinomial kernel, bit for bit") {
    Random rng(7);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto K = static_cast<std::size_t>(rng.integer(1, 10));
        const MeanPhiParams mp(rng.simplex(K), 0.0, true);
        const CountVector x(rng.composition(K, rng.integer(0, 10000)));
        const double phi_form = dmn_loglik_phi(mp, x).value;
        CHECK_FALSE(std::isnan(phi_form));
        CHECK(phi_form == mn_loglik_kernel(mp.p(), x));
    }
}

TEST_CASE("phi form is continuous at phi = 0") {
    Random rng(8);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto K = static_cast<std::size_t>(rng.integer(2, 6));
        const auto p = rng.simplex(K, 0.05);
        const MeanPhiParams near_zero(p, 1e-12, true);
        // Counts drawn from the model itself; the gap grows with the
        // chi-square discrepancy between x and p.
        const CountVector x(rng.multinomial(near_zero.p(), rng.integer(0, 1000)));
        const double gap = dmn_loglik_phi(near_zero, x).value - mn_loglik_kernel(near_zero.p(), x);
        CHECK(std::fabs(gap) <= 1e-8);
    }
}

TEST_CASE("dmn_log_pmf sums to one over all compositions") {
    const std::vector<std::vector<double>> alphas = {{1.0, 1.0, 1.0}, {0.5, 2.0, 3.0}};
    for (const auto& full : alphas) {
        for (std::size_t K = 1; K <= 3; ++K) {
            const AlphaParams alpha(std::vector<double>(full.begin(), full.begin() + static_cast<long>(K)));
            for (Count N = 0; N <= 6; ++N) {
                double total = 0.0;
                dmn::testing::for_each_composition(K, N, [&](const std::vector<Count>& x) {
                    total += std::exp(dmn_log_pmf(alpha, CountVector(x)));
                });
                CHECK(std::fabs(total - 1.0) <= 1e-12);
            }
        }
    }
}

TEST_CASE("no evaluator produces NaN on valid input") {
    Random rng(9);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto K = static_cast<std::size_t>(rng.integer(1, 6));
        const AlphaParams alpha(rng.alpha(K, 1e-6, 1e6));
        const CountVector x(rng.composition(K, rng.integer(0, 300)));
        auto p = rng.simplex(K);
        if (K > 1 && trial % 3 == 0) {
            p[0] = 0.0;  // zero-probability category
            double s = 0.0;
            for (double v : p) s += v;
            for (double& v : p) v /= s;
        }
        const MeanPhiParams mp(p, trial % 4 == 0 ? 0.0 : rng.uniform(0.0, 0.999), true);

        CHECK_FALSE(std::isnan(dmn_loglik_exact(alpha, x).value));
        CHECK_FALSE(std::isnan(dmn_loglik_lgamma(alpha, x).value));
        CHECK_FALSE(std::isnan(dmn_loglik_phi(mp, x).value));
        CHECK_FALSE(std::isnan(mn_loglik_kernel(mp.p(), x)));
        CHECK_FALSE(std::isnan(dmn_log_pmf(alpha, x)));
        CHECK_FALSE(std::isnan(mn_log_pmf(mp.p(), x)));
    }
}
