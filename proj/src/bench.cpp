#include "dmn/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "dmn/format.hpp"
#include "dmn/loglik.hpp"

namespace dmn {

namespace {

using Clock = std::chrono::steady_clock;

constexpr int kWarmupEvaluations = 10;

struct GridPoint {
    AlphaParams alpha;
    CountVector x;
};

GridPoint grid_point(const ExperimentConfig& cfg, Count n) {
    return {params_from_mean_phi(MeanPhiParams(cfg.p, cfg.phi)), CountVector(cfg.base_counts).scaled(n)};
}

LogLikResult evaluate(Method m, const GridPoint& pt) {
    return m == Method::Exact ? dmn_loglik_exact(pt.alpha, pt.x) : dmn_loglik_lgamma(pt.alpha, pt.x);
}

BenchRecord error_record(Count n, Method m, const LogLikResult& r, double reference,
                         std::int64_t wall_ns) {
    BenchRecord rec;
    rec.n_scale = n;
    rec.method = m;
    rec.abs_error = std::fabs(r.value - reference);
    rec.rel_error = reference == 0.0 ? rec.abs_error : rec.abs_error / std::fabs(reference);
    rec.wall_time_ns = std::max<std::int64_t>(1, wall_ns);
    rec.terms = r.terms;
    return rec;
}

std::int64_t median(std::vector<std::int64_t> v) {
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 == 1 ? v[mid] : (v[mid - 1] + v[mid]) / 2;
}

constexpr Method kMethods[] = {Method::Exact, Method::LogGamma};

}  // namespace

void ExperimentConfig::validate() const {
    if (base_counts.size() != p.size()) {
        throw DimensionError("base counts and p have different lengths");
    }
    static_cast<void>(CountVector(base_counts));
    if (!(phi > 0.0) || !(phi < 1.0)) throw DomainError("experiments need phi in (0, 1)");
    static_cast<void>(MeanPhiParams(p, phi));
    if (n_values.empty()) throw DomainError("n grid is empty");
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        if (n_values[i] < 0) throw DomainError("n values must be non-negative");
        if (i > 0 && n_values[i] <= n_values[i - 1]) {
            throw DomainError("n values must be strictly increasing");
        }
    }
    if (repeats < 3) throw DomainError("repeats must be at least 3");
    if (evaluations_per_point < 1) throw DomainError("evaluations per point must be at least 1");
}

std::vector<Count> ExperimentConfig::default_n_values() {
    return {1, 2, 5, 10, 20, 50, 100, 200, 500, 1000};
}

ExperimentConfig ExperimentConfig::accuracy_default() {
    ExperimentConfig cfg;
    cfg.base_counts = {1, 1, 1, 1};
    cfg.p = {0.1, 0.2, 0.3, 0.4};
    cfg.phi = 1.0 / 200.0;
    cfg.n_values = default_n_values();
    return cfg;
}

ExperimentConfig ExperimentConfig::runtime_default() {
    ExperimentConfig cfg;
    cfg.base_counts = {1, 2, 3};
    cfg.p = {1.0 / 6.0, 1.0 / 3.0, 1.0 / 2.0};
    cfg.phi = 1.0 / 60.0;
    cfg.n_values = default_n_values();
    return cfg;
}

std::vector<BenchRecord> run_accuracy_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::size_t points = cfg.n_values.size();
    std::vector<BenchRecord> records(points * 2);
    // Fail on the calling thread for grids whose scaled counts are unusable.
    for (Count n : cfg.n_values) detail::check_total(CountVector(cfg.base_counts).scaled(n));

    auto run_point = [&](std::size_t i) {
        const Count n = cfg.n_values[i];
        const GridPoint pt = grid_point(cfg, n);
        const double reference = reference_loglik(pt.alpha, pt.x);
        for (std::size_t m = 0; m < 2; ++m) {
            const auto start = Clock::now();
            const LogLikResult r = evaluate(kMethods[m], pt);
            const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
            records[i * 2 + m] = error_record(n, kMethods[m], r, reference, ns);
        }
    };

    unsigned threads = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, points));
    if (threads <= 1) {
        for (std::size_t i = 0; i < points; ++i) run_point(i);
    } else {
        // Strided assignment: the expensive large-n points land on different workers.
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < points; i += threads) run_point(i);
            });
        }
    }
    return records;
}

std::vector<BenchRecord> run_runtime_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<BenchRecord> records;
    records.reserve(cfg.n_values.size() * 2);
    volatile double sink = 0.0;

    for (Count n : cfg.n_values) {
        const GridPoint pt = grid_point(cfg, n);
        const double reference = reference_loglik(pt.alpha, pt.x);
        for (Method m : kMethods) {
            LogLikResult r;
            for (int w = 0; w < kWarmupEvaluations; ++w) {
                r = evaluate(m, pt);
                sink = sink + r.value;
            }
            std::vector<std::int64_t> samples;
            samples.reserve(static_cast<std::size_t>(cfg.repeats));
            for (int rep = 0; rep < cfg.repeats; ++rep) {
                const auto start = Clock::now();
                for (int e = 0; e < cfg.evaluations_per_point; ++e) {
                    r = evaluate(m, pt);
                    sink = sink + r.value;
                }
                samples.push_back(
                    std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count());
            }
            records.push_back(error_record(n, m, r, reference, median(std::move(samples))));
        }
    }
    return records;
}

void write_bench_csv(std::ostream& out, std::span<const BenchRecord> records) {
    out << kBenchCsvHeader << '\n';
    for (const BenchRecord& r : records) {
        out << r.n_scale << ',' << to_string(r.method) << ',' << format_number(r.abs_error) << ','
            << format_number(r.rel_error) << ',' << r.wall_time_ns << ',' << r.terms << '\n';
    }
}

std::string bench_json(std::string_view experiment, std::span<const BenchRecord> records) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const BenchRecord& r : records) {
        rows.push_back({{"n", r.n_scale},
                        {"method", to_string(r.method)},
                        {"abs_error", r.abs_error},
                        {"rel_error", r.rel_error},
                        {"wall_time_ns", r.wall_time_ns},
                        {"terms", r.terms}});
    }
    nlohmann::ordered_json doc;
    doc["schema_version"] = kBenchSchemaVersion;
    doc["experiment"] = experiment;
    doc["records"] = std::move(rows);
    return doc.dump(2) + "\n";
}

}  // namespace dmn
