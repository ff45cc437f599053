// edgeplace/schedule.hpp
//
// Per-slot request scheduling for a fixed placement x(t). Demand that cannot
// be routed (no placed, connected node or not enough bandwidth) is sent to the
// overflow channel at Instance::overflow_penalty() per request.

#pragma once

#include "edgeplace/model.hpp"

namespace edgeplace::baselines {

struct ScheduleResult {
    std::vector<double> y;         // one per route of slot t
    std::vector<double> unserved;  // one per demand of slot t
    double service_cost = 0.0;     // sum d lambda y + overflow_cost
    double overflow_cost = 0.0;
    double overflow_mass = 0.0;    // sum lambda * unserved
    bool used_simplex = false;
};

/// Minimizes sum d lambda y + P lambda (1 - sum_m y) subject to y <= x,
/// sum_m y <= 1 and the node bandwidth limits. x may be fractional.
ScheduleResult schedule_lp(const Instance& inst, const Matrix& x, int t);

}  // namespace edgeplace::baselines
