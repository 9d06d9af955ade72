#include "dmn/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "dmn/compensated_sum.hpp"

namespace dmn {

namespace {

double compensated_total(std::span<const double> values) {
    NeumaierSum acc;
    for (double v : values) acc.add(v);
    return acc.result();
}

}  // namespace

CountVector::CountVector(std::vector<Count> counts) : counts_(std::move(counts)) {
    if (counts_.empty()) {
        throw DimensionError("count vector must have at least one category");
    }
    for (std::size_t k = 0; k < counts_.size(); ++k) {
        const Count c = counts_[k];
        if (c < 0) {
            throw DomainError("count " + std::to_string(k) + " is negative (" + std::to_string(c) + ")");
        }
        if (total_ > std::numeric_limits<Count>::max() - c) {
            throw ResourceError("total count overflows a 64-bit integer");
        }
        total_ += c;
    }
}

CountVector CountVector::scaled(Count factor) const {
    if (factor < 0) throw DomainError("scale factor must be non-negative");
    std::vector<Count> out(counts_.size());
    for (std::size_t k = 0; k < counts_.size(); ++k) {
        if (factor != 0 && counts_[k] > std::numeric_limits<Count>::max() / factor) {
            throw ResourceError("scaled count overflows a 64-bit integer");
        }
        out[k] = counts_[k] * factor;
    }
    return CountVector(std::move(out));
}

AlphaParams::AlphaParams(std::vector<double> alpha) : alpha_(std::move(alpha)) {
    if (alpha_.empty()) {
        throw DimensionError("alpha must have at least one category");
    }
    for (std::size_t k = 0; k < alpha_.size(); ++k) {
        const double a = alpha_[k];
        if (!std::isfinite(a) || !(a > 0.0)) {
            throw DomainError("alpha[" + std::to_string(k) + "] must be positive and finite");
        }
    }
    std::vector<double> sorted = alpha_;
    std::sort(sorted.begin(), sorted.end());
    NeumaierSum acc;
    for (double a : sorted) acc.add(a);
    const TwoSum s = two_sum(acc.sum(), acc.residue());
    sum_ = s.sum;
    sum_residual_ = s.err;
}

MeanPhiParams::MeanPhiParams(std::vector<double> p, double phi, bool renormalize)
    : p_(std::move(p)), phi_(phi) {
    if (p_.empty()) {
        throw DimensionError("probability vector must have at least one category");
    }
    if (!std::isfinite(phi_) || phi_ < 0.0 || phi_ >= 1.0) {
        throw DomainError("phi must lie in [0, 1)");
    }
    for (double v : p_) {
        if (!std::isfinite(v) || v < 0.0) {
            throw DomainError("probabilities must be finite and non-negative");
        }
    }
    if (renormalize) {
        const double total = compensated_total(p_);
        if (!(total > 0.0)) throw DomainError("cannot renormalize a zero probability vector");
        for (double& v : p_) v /= total;
    }
    check_probability_vector(p_);
}

void check_probability_vector(std::span<const double> p) {
    if (p.empty()) {
        throw DimensionError("probability vector must have at least one category");
    }
    for (double v : p) {
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
            throw DomainError("probabilities must lie in [0, 1]");
        }
    }
    const double total = compensated_total(p);
    if (std::fabs(total - 1.0) > MeanPhiParams::kSimplexTolerance) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", total);
        throw DomainError(std::string("probabilities sum to ") + buf + ", not 1");
    }
}

std::string_view to_string(Method m) noexcept {
    switch (m) {
        case Method::Exact: return "exact";
        case Method::LogGamma: return "lgamma";
        case Method::PhiForm: return "phi";
        case Method::MN: return "mn";
    }
    return "unknown";
}

}  // namespace dmn
