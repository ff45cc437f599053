// edgeplace/ora.hpp
//
// Online regularization with look-ahead. Version pi in 0..L partitions time
// into episodes starting at pi + (L+1) v; each version is solved episode by
// episode, threading its own previous placement, and the L+1 fractional
// trajectories are averaged.

#pragma once

#include "edgeplace/episode.hpp"

#include <string>
#include <vector>

namespace edgeplace {

struct EpisodeWindow {
    int t_start = 0;  // nominal start
    int first = 1;    // clipped to [1, T]
    int last = 1;
};

/// Ordered, disjoint windows of version pi; their union is [1, T].
std::vector<EpisodeWindow> enumerate_episodes(int T, int L, int pi);

struct OraConfig {
    int L = 5;
    double eps = 0.3;
    SolverConfig solver;
    int jobs = 1;  // versions solved concurrently
};

struct OraEpisode {
    int version = 0;
    EpisodeProblem problem;
    EpisodeSolution solution;
};

struct OraRun {
    int L = 0;
    double eps = 0.0;
    std::vector<SolutionTrajectory> versions;   // [pi]
    std::vector<std::vector<OraEpisode>> episodes;  // [pi][episode]
    SolutionTrajectory averaged;                // z = [x(t) - x(t-1)]^+
    CostBreakdown cost;                         // of the averaged trajectory
    double max_kkt_residual = 0.0;
    bool all_converged = true;
};

/// The instance must outlive the returned run (episodes point into it).
/// Throws InfeasibleWindow with version/start context on infeasible windows.
OraRun run_ora(const Instance& inst, const OraConfig& cfg);

double competitive_ratio_r1(double MK, double ceil_r, int L, double eps);
/// Uses ceil(max b/l) from the instance.
double competitive_ratio_r1(const Instance& inst, int L, double eps);

/// Per-version placement dump, header `t,m,k,x`.
std::string version_csv(const OraRun& run, int pi);

}  // namespace edgeplace
