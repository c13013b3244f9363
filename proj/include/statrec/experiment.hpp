#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "statrec/datagen.hpp"
#include "statrec/global_decoder.hpp"
#include "statrec/graph.hpp"
#include "statrec/local_solver.hpp"

namespace statrec {

enum class Method { Ours, Majority, Lbp, CopyZ };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct InstanceSource {
    enum class Type { RandomTree, Grid } type = Type::RandomTree;
    int n_min = 1000;  // random trees: n drawn uniformly from [n_min, n_max]
    int n_max = 1500;
    std::string pgm_path;  // grids: image to quantize
};

struct SolverConfig {
    Matcher matcher = Matcher::Greedy;
    int cc_restarts = 8;
    double delta = 0.1;
    bool use_p_prime = false;
    bool warm_start = true;
};

struct ExperimentConfig {
    std::string experiment = "single";  // sweep-k | sweep-p | single
    InstanceSource instance;
    std::vector<int> k_values;     // one entry unless sweep-k
    std::vector<double> p_values;  // one entry unless sweep-p
    double q = 0.1;
    int trials = 1;
    std::vector<Method> methods{Method::Ours};  // copy-z is always added
    SolverConfig solver;
    std::string trials_csv;
    std::string summary_csv;
    std::uint64_t seed = 0;
    int threads = 0;  // 0 = hardware concurrency
    bool record_millis = false;

    void validate() const;  // throws ConfigError
};

ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

struct TrialRecord {
    int point_index = 0;
    int trial_index = 0;
    int k = 0;
    double p = 0.0;
    double q = 0.0;
    int n = 0;
    std::uint64_t seed = 0;
    Method method = Method::Ours;
    int hamming = 0;
    double normalized = 0.0;
    double millis = 0.0;
    std::optional<double> K_n;
    std::optional<double> L_n;
    std::string heuristic_flags;
};

struct SummaryRow {
    int point_index = 0;
    Method method = Method::Ours;
    int k = 0;
    double p = 0.0;
    double q = 0.0;
    int trials = 0;
    double mean_normalized = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::optional<double> K_n;
    std::optional<double> L_n;
};

struct SweepResult {
    std::vector<TrialRecord> records;
    std::vector<SummaryRow> summary;
};

// Runs every (point, trial, method) cell with a seed derived from
// (config.seed, point, trial); trial-level parallelism with a deterministic
// merge, so the CSV bytes do not depend on the thread count.
SweepResult run_sweep(const ExperimentConfig& config);

void write_trials_csv(const std::string& path, const std::string& experiment,
                      const std::vector<TrialRecord>& records);
void write_summary_csv(const std::string& path, const std::string& experiment,
                       const std::vector<SummaryRow>& rows);

struct BootstrapCi {
    double mean = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

// Percentile bootstrap (default 95%), deterministic for a fixed seed.
BootstrapCi bootstrap_mean_ci(const std::vector<double>& values, int resamples,
                              std::uint64_t seed, double coverage = 0.95);
// CI of mean(a) - mean(b) for independent samples.
BootstrapCi bootstrap_diff_ci(const std::vector<double>& a, const std::vector<double>& b,
                              int resamples, std::uint64_t seed, double coverage = 0.95);
// CI of mean(a - b) for paired samples of equal length.
BootstrapCi bootstrap_paired_diff_ci(const std::vector<double>& a, const std::vector<double>& b,
                                     int resamples, std::uint64_t seed, double coverage = 0.95);

// Deterministic gray-scale test pattern: a smooth low-frequency field with a
// couple of blobs, useful as a stand-in for a photograph at desk scale.
Image synthetic_image(int rows, int cols);

}  // namespace statrec
