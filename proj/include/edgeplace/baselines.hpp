// edgeplace/baselines.hpp
//
// Comparison policies. Both return integral trajectories with y (and any
// overflow) produced by schedule_lp.
//
// greedy: per slot, starting from the previous placement, repeatedly apply the
//   single best add / remove / swap move on one node, scored by
//   storage + scheduling + b for added services, until nothing improves.
//   Swaps are only considered for services that do not fit as plain adds.
// cache_only: at t = 1 each node takes services in decreasing total first-slot
//   demand (ties: smaller r_k, then lower k) while they fit, and keeps them.

#pragma once

#include "edgeplace/schedule.hpp"

namespace edgeplace::baselines {

struct BaselineRun {
    SolutionTrajectory trajectory;
    CostBreakdown cost;
    int moves = 0;          // accepted greedy moves over the horizon
    int max_slot_moves = 0;
};

BaselineRun greedy(const Instance& inst);
BaselineRun cache_only(const Instance& inst);

/// Greedy's per-slot score for placement x given the previous slot's x_prev.
double greedy_slot_objective(const Instance& inst, const Matrix& x, const Matrix& x_prev, int t);

}  // namespace edgeplace::baselines
