#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dmn/types.hpp"

namespace dmn {

/// High-precision value of the exact log-likelihood kernel. Every log and the
/// running sums are carried in a 50-significant-digit binary float, with alpha
/// and A taken exactly from the double inputs. Ground truth for the accuracy
/// experiment.
double reference_loglik(const AlphaParams& alpha, const CountVector& x);

struct BenchRecord {
    Count n_scale = 0;
    Method method = Method::Exact;
    double abs_error = 0.0;  // |value - reference_loglik|
    double rel_error = 0.0;  // abs_error / |reference|, or abs_error when the reference is 0
    std::int64_t wall_time_ns = 0;
    std::int64_t terms = 0;
};

/// Counts are base_counts * n for each n in n_values; alpha comes from (p, phi).
struct ExperimentConfig {
    std::vector<Count> base_counts;
    std::vector<double> p;
    double phi = 0.0;
    std::vector<Count> n_values;
    int repeats = 11;
    int evaluations_per_point = 100;
    unsigned threads = 1;  // accuracy sweep only; timing is always single-threaded

    /// Throws DomainError / DimensionError on an invalid configuration.
    void validate() const;

    static std::vector<Count> default_n_values();
    /// x = n(1,1,1,1), p = (.1,.2,.3,.4), phi = 1/200.
    static ExperimentConfig accuracy_default();
    /// x = n(1,2,3), p = (1/6,1/3,1/2), phi = 1/60.
    static ExperimentConfig runtime_default();
};

/// One Exact and one LogGamma record per n, errors measured against
/// reference_loglik. wall_time_ns is a single evaluation.
std::vector<BenchRecord> run_accuracy_experiment(const ExperimentConfig& cfg);

/// One Exact and one LogGamma record per n. wall_time_ns is the median over
/// `repeats` of the time for `evaluations_per_point` consecutive evaluations,
/// after a warm-up of at least 10 evaluations.
std::vector<BenchRecord> run_runtime_experiment(const ExperimentConfig& cfg);

inline constexpr int kBenchSchemaVersion = 1;
inline constexpr const char* kBenchCsvHeader = "n,method,abs_error,rel_error,wall_time_ns,terms";

void write_bench_csv(std::ostream& out, std::span<const BenchRecord> records);
/// {"schema_version": 1, "experiment": ..., "records": [ ... ]}
std::string bench_json(std::string_view experiment, std::span<const BenchRecord> records);

}  // namespace dmn
