#include "dmn/cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dmn/bench.hpp"
#include "dmn/compensated_sum.hpp"
#include "dmn/count_table.hpp"
#include "dmn/estimate.hpp"
#include "dmn/format.hpp"
#include "dmn/loglik.hpp"

namespace dmn::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kOutputSchemaVersion = 1;

// Bad flags or input that cannot be used as given (exit 2).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Infinite values are written as strings so the JSON stays valid.
Json json_number(double v) {
    if (!std::isfinite(v)) return format_number(v);
    return v;
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file '" + out_path + "'");
    file << text;
    if (!file) throw std::runtime_error("failed writing '" + out_path + "'");
}

CountTable load_table(const std::string& path) {
    CountTable table = read_count_table(path);
    if (table.rows.empty()) throw UsageError("'" + path + "' contains no observations");
    return table;
}

void check_row_width(const CountTable& table, std::size_t expected) {
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        if (table.rows[r].size() != expected) {
            throw UsageError("row " + std::to_string(r + 1) + " (line " + std::to_string(table.line_numbers[r]) +
                             ") has " + std::to_string(table.rows[r].size()) +
                             " categories but the parameters have " + std::to_string(expected));
        }
    }
}

// ---------------------------------------------------------------------------
// loglik

struct LoglikFlags {
    std::string input;
    std::vector<double> alpha;
    std::vector<double> p;
    std::optional<double> phi;
    std::string method;
    std::string format = "csv";
    std::string out;
};

std::string cmd_loglik(const LoglikFlags& f) {
    const bool by_alpha = !f.alpha.empty();
    if (!by_alpha && (f.p.empty() || !f.phi)) {
        throw UsageError("give either --alpha or both --p and --phi");
    }
    const std::string method = f.method.empty() ? (by_alpha ? "exact" : "phi") : f.method;
    if (by_alpha && method == "phi") {
        throw UsageError("--method phi needs --p and --phi instead of --alpha");
    }

    const CountTable table = load_table(f.input);
    std::optional<AlphaParams> alpha;
    std::optional<MeanPhiParams> mean_phi;
    if (by_alpha) {
        alpha.emplace(f.alpha);
    } else {
        mean_phi.emplace(f.p, *f.phi);
        if (method != "phi") {
            if (mean_phi->phi() == 0.0) {
                throw DomainError(
                    "phi = 0 is the multinomial limit and has no finite alpha; "
                    "use --method phi to evaluate it");
            }
            alpha.emplace(params_from_mean_phi(*mean_phi));
        }
    }
    check_row_width(table, alpha ? alpha->size() : mean_phi->size());

    std::vector<double> values;
    values.reserve(table.rows.size());
    for (const CountVector& x : table.rows) {
        if (method == "phi") {
            values.push_back(dmn_loglik_phi(*mean_phi, x).value);
        } else if (method == "lgamma") {
            values.push_back(dmn_loglik_lgamma(*alpha, x).value);
        } else {
            values.push_back(dmn_loglik_exact(*alpha, x).value);
        }
    }
    double total = 0.0;
    if (std::find(values.begin(), values.end(), kNegInf) != values.end()) {
        total = kNegInf;
    } else {
        NeumaierSum acc;
        for (double v : values) acc.add(v);
        total = acc.result();
    }

    if (f.format == "json") {
        Json rows = Json::array();
        for (std::size_t r = 0; r < values.size(); ++r) {
            rows.push_back({{"row", r + 1}, {"loglik", json_number(values[r])}});
        }
        Json doc;
        doc["schema_version"] = kOutputSchemaVersion;
        doc["command"] = "loglik";
        doc["method"] = method;
        doc["rows"] = std::move(rows);
        doc["total"] = json_number(total);
        return doc.dump(2) + "\n";
    }
    std::ostringstream os;
    os << "row,loglik\n";
    for (std::size_t r = 0; r < values.size(); ++r) os << r + 1 << ',' << format_number(values[r]) << '\n';
    os << "total," << format_number(total) << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------
// fit

struct FitFlags {
    std::string input;
    std::vector<double> init;
    double tol = 1e-8;
    int max_iter = 1000;
    unsigned threads = 0;
    bool trace = false;
    std::string format = "csv";
    std::string out;
};

std::string cmd_fit(const FitFlags& f) {
    const CountTable table = load_table(f.input);
    if (table.categories() < 2) {
        throw UsageError("domain error: a single-category table has a constant likelihood; nothing to fit");
    }
    FitOptions options;
    if (!f.init.empty()) {
        check_row_width(table, f.init.size());
        options.init.emplace(f.init);
    }
    options.tol = f.tol;
    options.max_iter = f.max_iter;
    options.threads = f.threads;
    const FitResult fit = fit_alpha_mle(Dataset(table.rows), options);

    if (f.format == "json") {
        Json alpha = Json::array();
        for (double a : fit.alpha_hat.alpha()) alpha.push_back(a);
        Json floored = Json::array();
        for (std::size_t k : fit.floored) floored.push_back(k + 1);
        Json doc;
        doc["schema_version"] = kOutputSchemaVersion;
        doc["command"] = "fit";
        doc["alpha_hat"] = std::move(alpha);
        doc["loglik"] = json_number(fit.loglik);
        doc["iterations"] = fit.iterations;
        doc["converged"] = fit.converged;
        doc["floored"] = std::move(floored);
        if (f.trace) {
            Json trace = Json::array();
            for (const TracePoint& t : fit.trace) {
                trace.push_back({{"iteration", t.iteration}, {"loglik", json_number(t.loglik)}});
            }
            doc["trace"] = std::move(trace);
        }
        return doc.dump(2) + "\n";
    }

    std::ostringstream os;
    os << "field,value\n";
    for (std::size_t k = 0; k < fit.alpha_hat.size(); ++k) {
        os << "alpha_" << k + 1 << ',' << format_number(fit.alpha_hat[k]) << '\n';
    }
    os << "loglik," << format_number(fit.loglik) << '\n';
    os << "iterations," << fit.iterations << '\n';
    os << "converged," << (fit.converged ? "true" : "false") << '\n';
    if (!fit.floored.empty()) {
        os << "floored,";
        for (std::size_t i = 0; i < fit.floored.size(); ++i) os << (i ? ";" : "") << fit.floored[i] + 1;
        os << '\n';
    }
    if (f.trace) {
        for (const TracePoint& t : fit.trace) {
            os << "trace_" << t.iteration << ',' << format_number(t.loglik) << '\n';
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// bench

struct BenchFlags {
    std::vector<Count> n_values;
    std::vector<Count> counts;
    std::vector<double> p;
    std::optional<double> phi;
    int repeats = 11;
    int evals = 100;
    unsigned threads = 0;
    std::string format = "csv";
    std::string out;
};

std::string cmd_bench(std::string_view experiment, const BenchFlags& f) {
    const bool accuracy = experiment == "accuracy";
    ExperimentConfig cfg = accuracy ? ExperimentConfig::accuracy_default() : ExperimentConfig::runtime_default();
    if (!f.n_values.empty()) cfg.n_values = f.n_values;
    if (!f.counts.empty()) cfg.base_counts = f.counts;
    if (!f.p.empty()) cfg.p = f.p;
    if (f.phi) cfg.phi = *f.phi;
    cfg.repeats = f.repeats;
    cfg.evaluations_per_point = f.evals;
    cfg.threads = accuracy ? f.threads : 1;
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        throw UsageError(std::string("invalid benchmark configuration: ") + e.what());
    }

    const std::vector<BenchRecord> records =
        accuracy ? run_accuracy_experiment(cfg) : run_runtime_experiment(cfg);
    if (f.format == "json") return bench_json(experiment, records);
    std::ostringstream os;
    write_bench_csv(os, records);
    return os.str();
}

void add_format_flags(CLI::App* cmd, std::string& format, std::string& out) {
    cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", out, "Write output to PATH instead of stdout");
}

void add_bench_flags(CLI::App* cmd, BenchFlags& f) {
    cmd->add_option("--n", f.n_values, "Count multipliers, strictly increasing (e.g. 10,100,1000)")
        ->delimiter(',');
    cmd->add_option("--counts", f.counts, "Base count pattern x, scaled by each n")->delimiter(',');
    cmd->add_option("--p", f.p, "Category probabilities")->delimiter(',');
    cmd->add_option("--phi", f.phi, "Over-dispersion in (0, 1)");
    cmd->add_option("--repeats", f.repeats, "Timing repeats (median is reported)");
    cmd->add_option("--evals", f.evals, "Evaluations per timed point");
    cmd->add_option("--threads", f.threads, "Workers for the accuracy sweep (0 = auto)");
    add_format_flags(cmd, f.format, f.out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dirichlet-multinomial log-likelihood: evaluate, fit and benchmark", "dmn"};
    app.require_subcommand(1);

    LoglikFlags lf;
    CLI::App* loglik = app.add_subcommand("loglik", "Log-likelihood kernel of each row of a count file");
    loglik->add_option("input", lf.input, "CSV count file")->required();
    auto* alpha_opt = loglik->add_option("--alpha", lf.alpha, "Concentration parameters")->delimiter(',');
    auto* p_opt = loglik->add_option("--p", lf.p, "Category probabilities")->delimiter(',');
    auto* phi_opt = loglik->add_option("--phi", lf.phi, "Over-dispersion in [0, 1)");
    alpha_opt->excludes(p_opt)->excludes(phi_opt);
    p_opt->needs(phi_opt);
    phi_opt->needs(p_opt);
    loglik->add_option("--method", lf.method, "exact | lgamma | phi")
        ->check(CLI::IsMember({"exact", "lgamma", "phi"}));
    add_format_flags(loglik, lf.format, lf.out);

    FitFlags ff;
    CLI::App* fit = app.add_subcommand("fit", "Maximum-likelihood alpha from a count file");
    fit->add_option("input", ff.input, "CSV count file")->required();
    fit->add_option("--alpha", ff.init, "Initial alpha")->delimiter(',');
    fit->add_option("--tol", ff.tol, "Convergence tolerance on relative alpha change");
    fit->add_option("--max-iter", ff.max_iter, "Iteration limit")->check(CLI::NonNegativeNumber);
    fit->add_option("--threads", ff.threads, "Workers for the final likelihood (0 = auto)");
    fit->add_flag("--trace", ff.trace, "Include the per-iteration log-likelihood");
    add_format_flags(fit, ff.format, ff.out);

    BenchFlags accuracy_flags;
    BenchFlags runtime_flags;
    CLI::App* bench = app.add_subcommand("bench", "Accuracy and runtime experiments");
    bench->require_subcommand(1);
    CLI::App* accuracy = bench->add_subcommand("accuracy", "Error against a 50-digit reference");
    CLI::App* runtime = bench->add_subcommand("runtime", "Wall time per batch of evaluations");
    add_bench_flags(accuracy, accuracy_flags);
    add_bench_flags(runtime, runtime_flags);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageError;
    }

    try {
        std::string text;
        std::string out_path;
        if (loglik->parsed()) {
            text = cmd_loglik(lf);
            out_path = lf.out;
        } else if (fit->parsed()) {
            text = cmd_fit(ff);
            out_path = ff.out;
        } else if (accuracy->parsed()) {
            text = cmd_bench("accuracy", accuracy_flags);
            out_path = accuracy_flags.out;
        } else {
            text = cmd_bench("runtime", runtime_flags);
            out_path = runtime_flags.out;
        }
        emit(text, out_path, out);
        return kSuccess;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const DimensionError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return kComputationError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kComputationError;
    }
}

}  // namespace dmn::cli
