// edgeplace/harness.hpp
//
// Experiment plumbing behind the CLI: run a named algorithm on an instance,
// compare against an offline reference, write result files, and sweep one
// parameter over seeds.
//
// Algorithms: greedy, cache, ora, ora+rdsp, offline-frac, offline-int.
// The reference is offline-int when the exact oracle is tractable, otherwise
// offline-frac; the choice is recorded next to every ratio.

#pragma once

#include "edgeplace/diagnostics.hpp"
#include "edgeplace/oracle.hpp"
#include "edgeplace/tracegen.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace edgeplace {

class UnknownAlgorithm : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    std::string alg = "ora+rdsp";
    int L = 5;
    double eps = 0.3;
    double tol = 1e-6;
    std::uint64_t seed = 1;
    int trials = 20;
    int jobs = 1;
    bool timing = false;  // wall time in summaries breaks byte-reproducibility
    OracleConfig oracle;
};

const std::vector<std::string>& algorithm_names();

std::uint64_t trial_seed(std::uint64_t seed, int trial);

struct AlgorithmResult {
    std::string alg;
    bool randomized = false;
    CostBreakdown cost;  // per-slot mean over trials when randomized
    std::vector<double> trial_totals;
    double mean = 0.0;
    double stdev = 0.0;
    int evictions = 0;
    double max_kkt_residual = 0.0;
    bool converged = true;

    double total() const { return cost.cumulative; }
};

/// Throws UnknownAlgorithm, InfeasibleWindow, SolverFailure or OracleLimit.
AlgorithmResult run_algorithm(const Instance& inst, const RunConfig& cfg);

struct Reference {
    std::string kind;  // "offline-int" or "offline-frac"
    double value = 0.0;
};

Reference reference_cost(const Instance& inst, const RunConfig& cfg);

/// Runs cfg.alg and its reference. When out_dir is nonempty, writes
/// instance.json, perslot.csv and summary.json there. Returns the summary.
nlohmann::json run_experiment(const Instance& inst, const RunConfig& cfg, const std::string& out_dir);

struct SweepConfig {
    /// K, N, M, L, eps, R, C or RC. R, C and RC values are capacity factors
    /// applied to the generated instance; the others replace the setting.
    std::string parameter = "L";
    std::vector<double> values;
    GeneratorConfig base;
    std::vector<std::uint64_t> seeds{1};
    std::vector<std::string> algs{"ora"};
    RunConfig run;
};

struct SweepRow {
    std::string parameter;
    double value = 0.0;
    std::uint64_t seed = 0;
    std::string alg;
    double total = 0.0;
    double reference = 0.0;
    std::string reference_kind;
    double ratio = 1.0;
    double r1 = 0.0;  // theoretical bound at this point
};

std::vector<SweepRow> sweep(const SweepConfig& cfg);
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// ORA plus cfg.trials roundings, checked against the offline values.
BoundReport verify(const Instance& inst, const RunConfig& cfg);

}  // namespace edgeplace
