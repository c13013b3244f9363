#include "statrec/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "statrec/baselines.hpp"
#include "statrec/errors.hpp"
#include "statrec/rng.hpp"
#include "statrec/tree_solver.hpp"

namespace statrec {

using nlohmann::json;

std::string method_name(Method m) {
    switch (m) {
        case Method::Ours: return "ours";
        case Method::Majority: return "majority";
        case Method::Lbp: return "lbp";
        case Method::CopyZ: return "copy-z";
    }
    return "?";
}

Method method_from_name(const std::string& name) {
    if (name == "ours") return Method::Ours;
    if (name == "majority") return Method::Majority;
    if (name == "lbp") return Method::Lbp;
    if (name == "copy-z") return Method::CopyZ;
    throw ConfigError("unknown method: " + name);
}

void ExperimentConfig::validate() const {
    if (experiment != "sweep-k" && experiment != "sweep-p" && experiment != "single") {
        throw ConfigError("experiment must be sweep-k, sweep-p, or single");
    }
    if (k_values.empty()) throw ConfigError("no k values");
    if (p_values.empty()) throw ConfigError("no p values");
    if (experiment != "sweep-k" && k_values.size() != 1) throw ConfigError("one k unless sweep-k");
    if (experiment != "sweep-p" && p_values.size() != 1) throw ConfigError("one p unless sweep-p");
    if (trials < 1) throw ConfigError("trials must be >= 1");
    for (int k : k_values) {
        if (k < 2) throw ConfigError("k must be >= 2");
    }
    for (double p : p_values) {
        if (p < 0.0 || p >= 0.5) throw ConfigError("p must be in [0, 0.5)");
    }
    if (q < 0.0 || q >= 0.5) throw ConfigError("q must be in [0, 0.5)");
    if (instance.type == InstanceSource::Type::RandomTree) {
        if (instance.n_min < 1 || instance.n_max < instance.n_min) {
            throw ConfigError("random-tree needs 1 <= n_min <= n_max");
        }
    } else if (instance.pgm_path.empty()) {
        throw ConfigError("grid instance needs a pgm path");
    }
    if (trials_csv.empty() || summary_csv.empty()) throw ConfigError("output paths required");
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& err) {
        throw ConfigError(std::string("config is not valid JSON: ") + err.what());
    }
    ExperimentConfig config;
    try {
        config.experiment = doc.value("experiment", std::string("single"));
        const auto& inst = doc.at("instance");
        const std::string type = inst.value("type", std::string("random-tree"));
        if (type == "random-tree") {
            config.instance.type = InstanceSource::Type::RandomTree;
            config.instance.n_min = inst.value("n_min", 1000);
            config.instance.n_max = inst.value("n_max", config.instance.n_min);
        } else if (type == "grid") {
            config.instance.type = InstanceSource::Type::Grid;
            config.instance.pgm_path = inst.value("pgm", std::string());
        } else {
            throw ConfigError("instance type must be random-tree or grid");
        }
        if (doc.contains("k_values")) {
            config.k_values = doc.at("k_values").get<std::vector<int>>();
        } else if (doc.contains("k")) {
            config.k_values = {doc.at("k").get<int>()};
        }
        if (doc.contains("p_values")) {
            config.p_values = doc.at("p_values").get<std::vector<double>>();
        } else if (doc.contains("p")) {
            config.p_values = {doc.at("p").get<double>()};
        }
        config.q = doc.value("q", 0.1);
        config.trials = doc.value("trials", 1);
        if (doc.contains("methods")) {
            config.methods.clear();
            for (const auto& name : doc.at("methods")) {
                config.methods.push_back(method_from_name(name.get<std::string>()));
            }
        }
        if (doc.contains("solver")) {
            const auto& solver = doc.at("solver");
            const std::string matcher = solver.value("matcher", std::string("greedy"));
            if (matcher == "greedy") {
                config.solver.matcher = Matcher::Greedy;
            } else if (matcher == "exact") {
                config.solver.matcher = Matcher::Exact;
            } else {
                throw ConfigError("matcher must be greedy or exact");
            }
            config.solver.cc_restarts = solver.value("cc_restarts", 8);
            config.solver.delta = solver.value("delta", 0.1);
            config.solver.use_p_prime = solver.value("use_p_prime", false);
            config.solver.warm_start = solver.value("warm_start", true);
        }
        const auto& output = doc.at("output");
        config.trials_csv = output.value("trials_csv", std::string());
        config.summary_csv = output.value("summary_csv", std::string());
        config.seed = doc.value("seed", 0ULL);
        config.threads = doc.value("threads", 0);
        config.record_millis = doc.value("record_millis", false);
    } catch (const json::exception& err) {
        throw ConfigError(std::string("bad config: ") + err.what());
    }
    config.validate();
    return config;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_experiment_config(buffer.str());
}

namespace {

struct Point {
    int index = 0;
    int k = 0;
    double p = 0.0;
};

struct GridContext {
    LabeledGraph graph;
    TreeDecomposition td;
    std::vector<NodeLabeling> truth_per_point;
};

NodeLabeling run_method(Method method, const LabeledGraph& g, const EdgeSigns& x,
                        const NodeLabeling& z, const NodeLabeling* truth, int k, double p,
                        const ExperimentConfig& config, const TreeDecomposition* td,
                        std::uint64_t seed, TrialRecord& record) {
    switch (method) {
        case Method::CopyZ:
            return z;
        case Method::Majority:
            return majority_vote(g, x, z, k);
        case Method::Lbp:
            return loopy_bp(g, x, z, p, config.q, k);
        case Method::Ours:
            break;
    }
    if (config.instance.type == InstanceSource::Type::RandomTree) {
        const int budget = edge_budget(g.n(), p, config.solver.delta).effective_budget;
        return solve_tree(g, x, z, k, budget).labels;
    }
    RecoverOptions options;
    options.p = p;
    options.delta = config.solver.delta;
    options.use_p_prime = config.solver.use_p_prime;
    options.local.matcher = config.solver.matcher;
    options.local.cc_restarts = config.solver.cc_restarts;
    options.local.warm_start = config.solver.warm_start;
    options.local.seed = seed;
    options.precomputed = td;
    auto report = recover_graph(g, x, z, k, options, truth);
    record.K_n = report.budget.K_n;
    record.L_n = report.budget.L_n;
    std::string flags;
    if (report.budget.heuristic) flags += "mincut-proxy";
    if (report.decode.budget_raised) flags += flags.empty() ? "budget-raised" : ";budget-raised";
    record.heuristic_flags = flags;
    return report.labels;
}

std::string fmt(double value, const char* spec) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), spec, value);
    return buffer;
}

std::string fmt_opt(const std::optional<double>& value) {
    return value ? fmt(*value, "%.6g") : std::string();
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& config) {
    config.validate();

    std::vector<Point> points;
    if (config.experiment == "sweep-k") {
        for (std::size_t i = 0; i < config.k_values.size(); ++i) {
            points.push_back({static_cast<int>(i), config.k_values[i], config.p_values[0]});
        }
    } else if (config.experiment == "sweep-p") {
        for (std::size_t i = 0; i < config.p_values.size(); ++i) {
            points.push_back({static_cast<int>(i), config.k_values[0], config.p_values[i]});
        }
    } else {
        points.push_back({0, config.k_values[0], config.p_values[0]});
    }

    // copy-z anchors every sweep.
    std::vector<Method> methods = config.methods;
    if (std::find(methods.begin(), methods.end(), Method::CopyZ) == methods.end()) {
        methods.push_back(Method::CopyZ);
    }

    // Grid instances share one graph (and one decomposition) across the sweep.
    std::optional<GridContext> grid;
    if (config.instance.type == InstanceSource::Type::Grid) {
        const Image img = load_pgm(config.instance.pgm_path);
        GridContext context;
        for (const auto& point : points) {
            auto inst = quantize_image(img, point.k);
            if (context.truth_per_point.empty()) context.graph = inst.graph;
            context.truth_per_point.push_back(inst.truth);
        }
        context.td = decompose(context.graph);
        grid = std::move(context);
    }

    const int cells = static_cast<int>(points.size()) * config.trials;
    std::vector<TrialRecord> records(static_cast<std::size_t>(cells) * methods.size());

    std::atomic<int> cursor{0};
    auto worker = [&]() {
        for (;;) {
            const int cell = cursor.fetch_add(1);
            if (cell >= cells) return;
            const int point_index = cell / config.trials;
            const int trial = cell % config.trials;
            const Point& point = points[point_index];
            const std::uint64_t trial_seed =
                derive_seed(config.seed, static_cast<std::uint64_t>(point_index),
                            static_cast<std::uint64_t>(trial));

            LabeledGraph g;
            NodeLabeling truth;
            if (grid) {
                g = grid->graph;
                truth = grid->truth_per_point[point_index];
            } else {
                Rng meta(derive_seed(trial_seed, 0));
                const int span = config.instance.n_max - config.instance.n_min + 1;
                const int n = config.instance.n_min + meta.int_below(span);
                auto [tree, labels] = gen_random_tree(n, point.k, derive_seed(trial_seed, 1));
                g = std::move(tree);
                truth = std::move(labels);
            }
            NoiseParams noise{point.p, config.q, point.k, derive_seed(trial_seed, 2)};
            auto [z, x] = apply_noise(g, truth, noise);

            for (std::size_t mi = 0; mi < methods.size(); ++mi) {
                TrialRecord record;
                record.point_index = point_index;
                record.trial_index = trial;
                record.k = point.k;
                record.p = point.p;
                record.q = config.q;
                record.n = g.n();
                record.seed = trial_seed;
                record.method = methods[mi];
                const auto t0 = std::chrono::steady_clock::now();
                const NodeLabeling prediction =
                    run_method(methods[mi], g, x, z, &truth, point.k, point.p, config,
                               grid ? &grid->td : nullptr, derive_seed(trial_seed, 3 + mi),
                               record);
                if (config.record_millis) {
                    record.millis = std::chrono::duration<double, std::milli>(
                                        std::chrono::steady_clock::now() - t0)
                                        .count();
                }
                record.hamming = hamming_distance(prediction, truth);
                record.normalized = static_cast<double>(record.hamming) / g.n();
                records[static_cast<std::size_t>(cell) * methods.size() + mi] = record;
            }
        }
    };

    int threads = config.threads > 0 ? config.threads
                                     : static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    threads = std::min(threads, cells);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& thread : pool) thread.join();
    }

    SweepResult result;
    result.records = std::move(records);

    // Summary, deterministic: bootstrap seeded from (config.seed, point, method).
    for (const auto& point : points) {
        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
            std::vector<double> values;
            SummaryRow row;
            row.point_index = point.index;
            row.method = methods[mi];
            row.k = point.k;
            row.p = point.p;
            row.q = config.q;
            for (const auto& record : result.records) {
                if (record.point_index == point.index && record.method == methods[mi]) {
                    values.push_back(record.normalized);
                    if (record.K_n && !row.K_n) {
                        row.K_n = record.K_n;
                        row.L_n = record.L_n;
                    }
                }
            }
            row.trials = static_cast<int>(values.size());
            const auto ci = bootstrap_mean_ci(
                values, 1000,
                derive_seed(config.seed, 0xb007 + point.index, static_cast<std::uint64_t>(mi)));
            row.mean_normalized = ci.mean;
            row.ci_lo = ci.lo;
            row.ci_hi = ci.hi;
            result.summary.push_back(row);
        }
    }

    if (!config.trials_csv.empty()) {
        write_trials_csv(config.trials_csv, config.experiment, result.records);
    }
    if (!config.summary_csv.empty()) {
        write_summary_csv(config.summary_csv, config.experiment, result.summary);
    }
    return result;
}

namespace {

std::string timestamp_line() {
    const std::time_t now = std::time(nullptr);
    char buffer[64];
    std::tm tm_utc;
    gmtime_r(&now, &tm_utc);
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return std::string("# generated ") + buffer + " rng=" + std::string(kRngAlgorithm);
}

}  // namespace

void write_trials_csv(const std::string& path, const std::string& experiment,
                      const std::vector<TrialRecord>& records) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << timestamp_line() << '\n';
    out << "experiment,k,p,q,n,seed,method,hamming,normalized,millis,K_n,L_n,heuristic_flags\n";
    for (const auto& r : records) {
        out << experiment << ',' << r.k << ',' << fmt(r.p, "%g") << ',' << fmt(r.q, "%g") << ','
            << r.n << ',' << r.seed << ',' << method_name(r.method) << ',' << r.hamming << ','
            << fmt(r.normalized, "%.6f") << ','
            << (r.millis > 0.0 ? fmt(r.millis, "%.3f") : std::string()) << ',' << fmt_opt(r.K_n)
            << ',' << fmt_opt(r.L_n) << ',' << r.heuristic_flags << '\n';
    }
}

void write_summary_csv(const std::string& path, const std::string& experiment,
                       const std::vector<SummaryRow>& rows) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << timestamp_line() << '\n';
    out << "experiment,method,k,p,q,trials,mean_normalized,ci_lo,ci_hi,K_n,L_n\n";
    for (const auto& r : rows) {
        out << experiment << ',' << method_name(r.method) << ',' << r.k << ',' << fmt(r.p, "%g")
            << ',' << fmt(r.q, "%g") << ',' << r.trials << ',' << fmt(r.mean_normalized, "%.6f")
            << ',' << fmt(r.ci_lo, "%.6f") << ',' << fmt(r.ci_hi, "%.6f") << ',' << fmt_opt(r.K_n)
            << ',' << fmt_opt(r.L_n) << '\n';
    }
}

namespace {

double mean_of(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    double total = 0.0;
    for (double v : values) total += v;
    return total / static_cast<double>(values.size());
}

BootstrapCi percentile_ci(std::vector<double> samples, double mean, double coverage) {
    std::sort(samples.begin(), samples.end());
    const double tail = (1.0 - coverage) / 2.0;
    const auto at = [&](double fraction) {
        const double pos = fraction * (samples.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, samples.size() - 1);
        const double w = pos - lo;
        return samples[lo] * (1.0 - w) + samples[hi] * w;
    };
    return {mean, at(tail), at(1.0 - tail)};
}

}  // namespace

BootstrapCi bootstrap_mean_ci(const std::vector<double>& values, int resamples,
                              std::uint64_t seed, double coverage) {
    if (values.empty()) return {};
    Rng rng(seed);
    std::vector<double> means(resamples);
    for (int r = 0; r < resamples; ++r) {
        double total = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            total += values[rng.below(values.size())];
        }
        means[r] = total / static_cast<double>(values.size());
    }
    return percentile_ci(std::move(means), mean_of(values), coverage);
}

BootstrapCi bootstrap_diff_ci(const std::vector<double>& a, const std::vector<double>& b,
                              int resamples, std::uint64_t seed, double coverage) {
    if (a.empty() || b.empty()) return {};
    Rng rng(seed);
    std::vector<double> diffs(resamples);
    for (int r = 0; r < resamples; ++r) {
        double ta = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) ta += a[rng.below(a.size())];
        double tb = 0.0;
        for (std::size_t i = 0; i < b.size(); ++i) tb += b[rng.below(b.size())];
        diffs[r] = ta / a.size() - tb / b.size();
    }
    return percentile_ci(std::move(diffs), mean_of(a) - mean_of(b), coverage);
}

BootstrapCi bootstrap_paired_diff_ci(const std::vector<double>& a, const std::vector<double>& b,
                                     int resamples, std::uint64_t seed, double coverage) {
    if (a.size() != b.size() || a.empty()) throw ConfigError("paired bootstrap needs equal sizes");
    Rng rng(seed);
    std::vector<double> diffs(resamples);
    for (int r = 0; r < resamples; ++r) {
        double total = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const std::size_t j = rng.below(a.size());
            total += a[j] - b[j];
        }
        diffs[r] = total / static_cast<double>(a.size());
    }
    double mean = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) mean += a[i] - b[i];
    mean /= static_cast<double>(a.size());
    return percentile_ci(std::move(diffs), mean, coverage);
}

Image synthetic_image(int rows, int cols) {
    Image img;
    img.rows = rows;
    img.cols = cols;
    img.pixels.resize(rows * cols);
    const double pi = 3.14159265358979323846;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const double y = static_cast<double>(r) / rows;
            const double x = static_cast<double>(c) / cols;
            double v = 0.5 + 0.28 * std::sin(2.0 * pi * (1.1 * x + 0.4 * y)) +
                       0.22 * std::cos(2.0 * pi * (0.7 * y - 0.3 * x) + 0.8);
            const double blob1 = std::exp(-((x - 0.3) * (x - 0.3) + (y - 0.35) * (y - 0.35)) /
                                          0.02);
            const double blob2 = std::exp(-((x - 0.72) * (x - 0.72) + (y - 0.68) * (y - 0.68)) /
                                          0.03);
            v += 0.25 * blob1 - 0.2 * blob2;
            v = std::min(1.0, std::max(0.0, v));
            img.pixels[r * cols + c] = static_cast<int>(std::lround(v * 255.0));
        }
    }
    return img;
}

}  // namespace statrec
