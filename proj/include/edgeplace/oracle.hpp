// edgeplace/oracle.hpp
//
// Exact offline references for small instances. The integer optimum is a
// dynamic program over joint placements: each node holds a capacity-feasible
// subset of services (a bitmask), a joint state picks one subset per node.
// Joint states are numbered in lexicographic order of (mask_0, ..., mask_{M-1}),
// so index 0 is the empty placement.

#pragma once

#include "edgeplace/episode.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace edgeplace {

class OracleLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OracleConfig {
    std::size_t state_cap = 100000;
    double transition_budget = 1e8;  // T * |states|^2
};

struct StateSpace {
    int M = 0;
    int K = 0;
    std::vector<std::vector<std::uint32_t>> node_masks;  // ascending per node
    std::vector<Matrix> node_add_cost;                    // [m](i, j): b of services added going i -> j
    std::size_t count = 0;

    std::vector<int> digits(std::size_t state) const;
    Matrix placement(std::size_t state) const;
    /// sum_m b_{m,k} over services added, accumulated in node order.
    double transition_cost(std::size_t from, std::size_t to) const;
};

/// Throws OracleLimit when the joint count exceeds cfg.state_cap or K > 31.
StateSpace enumerate_states(const Instance& inst, const OracleConfig& cfg = {});

/// C_R(state) + optimal scheduling cost (overflow priced) in slot t.
double slot_cost(const Instance& inst, const Matrix& placement, int t);

struct OracleResult {
    double cost = 0.0;
    SolutionTrajectory trajectory;
    std::vector<std::size_t> states;  // [t - 1]
};

/// Throws OracleLimit when T * |states|^2 exceeds the transition budget.
OracleResult offline_integer_opt(const Instance& inst, const OracleConfig& cfg = {});

/// Brute force over all |states|^T trajectories, summing in the same order as
/// the dynamic program. Only for micro instances.
OracleResult exhaustive_integer_opt(const Instance& inst, const OracleConfig& cfg = {});

/// True when offline_integer_opt would run within the limits.
bool integer_opt_tractable(const Instance& inst, const OracleConfig& cfg = {});

FractionalHorizon offline_fractional_opt(const Instance& inst, const SolverConfig& cfg = {});

}  // namespace edgeplace
