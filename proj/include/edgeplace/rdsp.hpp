// edgeplace/rdsp.hpp
//
// Dependent randomized rounding of a fractional placement, one slot at a time.
// Fractional entries form a bipartite graph (nodes on one side, services on the
// other). Each iteration takes a cycle, or failing that a maximal path, splits
// its edges into two alternating matchings and shifts mass between them so that
// at least one edge becomes integral while every marginal is preserved in
// expectation.

#pragma once

#include "edgeplace/model.hpp"
#include "edgeplace/schedule.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace edgeplace {

struct Edge {
    int m = 0;
    int k = 0;
    bool operator==(const Edge&) const = default;
};

/// Entries within this distance of 0 or 1 are snapped before rounding.
inline constexpr double kRoundSnap = kFeasTol;

struct RoundingState {
    Matrix x;
    std::vector<Edge> edges;  // entries strictly inside (0, 1)
    int iterations = 0;

    /// Snaps near-integral entries (solver noise up to kFeasTol outside
    /// [0, 1] included); throws std::invalid_argument on non-finite input or
    /// anything further out.
    static RoundingState from(const Matrix& x);
    void refresh_edges();
};

struct MatchingPair {
    std::vector<Edge> L1;
    std::vector<Edge> L2;
    bool cycle = false;
};

/// Requires a nonempty edge set.
MatchingPair find_cycle_or_path(const RoundingState& state);

struct RoundingStep {
    int iteration = 0;
    MatchingPair pair;
    double xi = 0.0;
    double omega = 0.0;
    double probability = 0.0;  // of the +xi branch
    bool up = false;
    double vertex_drift = 0.0;  // max change of two-edge vertex sums
};

using RoundingTrace = std::function<void(const RoundingStep&)>;

struct SlotRounding {
    Matrix x;
    int iterations = 0;
    double max_vertex_drift = 0.0;
};

SlotRounding rdsp_round_slot(const Matrix& x_frac, std::mt19937_64& rng, const RoundingTrace& trace = {});

/// Independent stream for slot t of a seeded run.
std::mt19937_64 slot_rng(std::uint64_t seed, int t);

struct CapacityRepair {
    Matrix x;
    int evictions = 0;
};

/// Evicts, per over-full node, the placed service with the smallest x_frac
/// (ties: larger r_k, then lower k) until storage fits.
CapacityRepair repair_capacity(const Matrix& x_bar, const Instance& inst, const Matrix& x_frac);

baselines::ScheduleResult repair_schedule(const Instance& inst, const Matrix& x_bar, int t);

/// 2 + ceil(max b/l).
double competitive_ratio_r2(const Instance& inst);

struct RoundedRun {
    SolutionTrajectory trajectory;  // integral, with overflow recorded
    CostBreakdown cost;
    int evictions = 0;
    int max_iterations = 0;
};

RoundedRun round_trajectory(const Instance& inst, const SolutionTrajectory& frac, std::uint64_t seed);

/// CSV `iteration,m,k,set,shift,probability` for one slot rounding.
std::string rounding_trace_csv(const Matrix& x_frac, std::mt19937_64& rng);

}  // namespace edgeplace
