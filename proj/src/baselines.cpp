#include "edgeplace/baselines.hpp"

#include <algorithm>
#include <numeric>

namespace edgeplace::baselines {

namespace {

double node_used(const Instance& inst, const Matrix& x, int m) {
    double u = 0.0;
    for (int k = 0; k < inst.num_services(); ++k) u += inst.service(k).storage * x(m, k);
    return u;
}

void finish(const Instance& inst, BaselineRun& run) {
    SolutionTrajectory& tr = run.trajectory;
    tr.integral = true;
    for (int t = 1; t <= inst.horizon(); ++t) {
        const auto s = schedule_lp(inst, tr.x[t - 1], t);
        tr.y[t - 1] = s.y;
        tr.unserved[t - 1] = s.unserved;
    }
    tr.fill_switching(zero_placement(inst));
    run.cost = compute_cost(inst, tr);
}

}  // namespace

double greedy_slot_objective(const Instance& inst, const Matrix& x, const Matrix& x_prev, int t) {
    const double storage = (inst.storage_cost().array() * x.array()).sum();
    const double placing = (inst.placement_cost().array() * (x - x_prev).cwiseMax(0.0).array()).sum();
    return storage + schedule_lp(inst, x, t).service_cost + placing;
}

BaselineRun greedy(const Instance& inst) {
    const int M = inst.num_nodes(), K = inst.num_services();
    BaselineRun run;
    run.trajectory = SolutionTrajectory::zeros(inst);
    Matrix prev = zero_placement(inst);
    const int move_cap = M * K * (K + 1);
    for (int t = 1; t <= inst.horizon(); ++t) {
        Matrix x = prev;
        double cur = greedy_slot_objective(inst, x, prev, t);
        int moves = 0;
        while (moves < move_cap) {
            double best = cur;
            Matrix best_x;
            auto consider = [&](const Matrix& cand) {
                const double v = greedy_slot_objective(inst, cand, prev, t);
                if (v < best - 1e-12) {
                    best = v;
                    best_x = cand;
                }
            };
            for (int m = 0; m < M; ++m) {
                const double used = node_used(inst, x, m);
                const double cap = inst.node(m).storage_cap + kFeasTol;
                for (int k = 0; k < K; ++k) {
                    Matrix cand = x;
                    if (x(m, k) > 0.5) {
                        cand(m, k) = 0.0;
                        consider(cand);
                        continue;
                    }
                    const double r = inst.service(k).storage;
                    cand(m, k) = 1.0;
                    if (used + r <= cap) {
                        consider(cand);
                        continue;
                    }
                    for (int j = 0; j < K; ++j) {
                        if (x(m, j) < 0.5 || used - inst.service(j).storage + r > cap) continue;
                        Matrix sw = cand;
                        sw(m, j) = 0.0;
                        consider(sw);
                    }
                }
            }
            if (best_x.size() == 0) break;
            x = std::move(best_x);
            cur = best;
            ++moves;
        }
        run.moves += moves;
        run.max_slot_moves = std::max(run.max_slot_moves, moves);
        run.trajectory.x[t - 1] = x;
        prev = x;
    }
    finish(inst, run);
    return run;
}

BaselineRun cache_only(const Instance& inst) {
    const int M = inst.num_nodes(), K = inst.num_services();
    std::vector<double> first(K, 0.0);
    for (const auto& d : inst.demands(1)) first[d.service] += d.lambda;
    std::vector<int> order(K);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (first[a] != first[b]) return first[a] > first[b];
        return inst.service(a).storage < inst.service(b).storage;
    });
    Matrix x = zero_placement(inst);
    for (int m = 0; m < M; ++m) {
        double used = 0.0;
        for (int k : order)
            if (used + inst.service(k).storage <= inst.node(m).storage_cap + kFeasTol) {
                x(m, k) = 1.0;
                used += inst.service(k).storage;
            }
    }
    BaselineRun run;
    run.trajectory = SolutionTrajectory::zeros(inst);
    for (int t = 1; t <= inst.horizon(); ++t) run.trajectory.x[t - 1] = x;
    finish(inst, run);
    return run;
}

}  // namespace edgeplace::baselines
