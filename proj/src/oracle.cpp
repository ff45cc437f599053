#include "edgeplace/oracle.hpp"

#include "edgeplace/schedule.hpp"

#include <cmath>
#include <limits>

namespace edgeplace {

namespace {

std::vector<std::vector<std::uint32_t>> node_subsets(const Instance& inst) {
    const int M = inst.num_nodes(), K = inst.num_services();
    if (K > 31) throw OracleLimit("oracle: K > 31 services; shrink the instance");
    std::vector<std::vector<std::uint32_t>> out(M);
    for (int m = 0; m < M; ++m)
        for (std::uint32_t mask = 0; mask < (1u << K); ++mask) {
            double used = 0.0;
            for (int k = 0; k < K; ++k)
                if (mask >> k & 1u) used += inst.service(k).storage;
            if (used <= inst.node(m).storage_cap + kFeasTol) out[m].push_back(mask);
        }
    return out;
}

double joint_count(const std::vector<std::vector<std::uint32_t>>& masks) {
    double c = 1.0;
    for (const auto& v : masks) c *= static_cast<double>(v.size());
    return c;
}

std::vector<double> slot_cost_table(const Instance& inst, const StateSpace& sp) {
    const int T = inst.horizon();
    std::vector<double> tab(sp.count * T);
    for (std::size_t s = 0; s < sp.count; ++s) {
        const Matrix x = sp.placement(s);
        for (int t = 1; t <= T; ++t) tab[s * T + (t - 1)] = slot_cost(inst, x, t);
    }
    return tab;
}

void fill_trajectory(const Instance& inst, const StateSpace& sp, OracleResult& res) {
    const int T = inst.horizon();
    SolutionTrajectory& tr = res.trajectory;
    tr = SolutionTrajectory::zeros(inst);
    tr.integral = true;
    for (int t = 1; t <= T; ++t) {
        tr.x[t - 1] = sp.placement(res.states[t - 1]);
        const auto sched = baselines::schedule_lp(inst, tr.x[t - 1], t);
        tr.y[t - 1] = sched.y;
        tr.unserved[t - 1] = sched.unserved;
    }
    tr.fill_switching(zero_placement(inst));
}

}  // namespace

std::vector<int> StateSpace::digits(std::size_t state) const {
    std::vector<int> d(M);
    for (int m = M - 1; m >= 0; --m) {
        const std::size_t base = node_masks[m].size();
        d[m] = static_cast<int>(state % base);
        state /= base;
    }
    return d;
}

Matrix StateSpace::placement(std::size_t state) const {
    Matrix x = Matrix::Zero(M, K);
    const auto d = digits(state);
    for (int m = 0; m < M; ++m)
        for (int k = 0; k < K; ++k)
            if (node_masks[m][d[m]] >> k & 1u) x(m, k) = 1.0;
    return x;
}

double StateSpace::transition_cost(std::size_t from, std::size_t to) const {
    const auto a = digits(from), b = digits(to);
    double c = 0.0;
    for (int m = 0; m < M; ++m) c += node_add_cost[m](a[m], b[m]);
    return c;
}

StateSpace enumerate_states(const Instance& inst, const OracleConfig& cfg) {
    StateSpace sp;
    sp.M = inst.num_nodes();
    sp.K = inst.num_services();
    sp.node_masks = node_subsets(inst);
    const double n = joint_count(sp.node_masks);
    if (n > static_cast<double>(cfg.state_cap))
        throw OracleLimit("oracle: " + std::to_string(static_cast<long long>(n)) + " joint states exceed the cap of " +
                          std::to_string(cfg.state_cap) + "; shrink the instance");
    sp.count = static_cast<std::size_t>(n);
    const Matrix& b = inst.placement_cost();
    for (int m = 0; m < sp.M; ++m) {
        const auto& masks = sp.node_masks[m];
        const int s = static_cast<int>(masks.size());
        Matrix c = Matrix::Zero(s, s);
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j) {
                const std::uint32_t added = masks[j] & ~masks[i];
                for (int k = 0; k < sp.K; ++k)
                    if (added >> k & 1u) c(i, j) += b(m, k);
            }
        sp.node_add_cost.push_back(std::move(c));
    }
    return sp;
}

double slot_cost(const Instance& inst, const Matrix& placement, int t) {
    const double cr = (inst.storage_cost().array() * placement.array()).sum();
    return cr + baselines::schedule_lp(inst, placement, t).service_cost;
}

bool integer_opt_tractable(const Instance& inst, const OracleConfig& cfg) {
    if (inst.num_services() > 31) return false;
    const double n = joint_count(node_subsets(inst));
    return n <= static_cast<double>(cfg.state_cap) && inst.horizon() * n * n <= cfg.transition_budget;
}

OracleResult offline_integer_opt(const Instance& inst, const OracleConfig& cfg) {
    const StateSpace sp = enumerate_states(inst, cfg);
    const int T = inst.horizon();
    const double n = static_cast<double>(sp.count);
    if (T * n * n > cfg.transition_budget)
        throw OracleLimit("oracle: T*|states|^2 exceeds the transition budget; shrink the instance");
    const std::vector<double> sc = slot_cost_table(inst, sp);
    const std::size_t S = sp.count;

    // Per-state digit cache keeps the inner loop to table lookups.
    std::vector<int> dig(S * sp.M);
    for (std::size_t s = 0; s < S; ++s) {
        const auto d = sp.digits(s);
        std::copy(d.begin(), d.end(), dig.begin() + s * sp.M);
    }
    auto trans = [&](std::size_t from, std::size_t to) {
        double c = 0.0;
        for (int m = 0; m < sp.M; ++m) c += sp.node_add_cost[m](dig[from * sp.M + m], dig[to * sp.M + m]);
        return c;
    };

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> V(S, inf), W(S);
    V[0] = 0.0;
    std::vector<std::size_t> arg(S * T);
    for (int t = 1; t <= T; ++t) {
        for (std::size_t to = 0; to < S; ++to) {
            double best = inf;
            std::size_t who = 0;
            for (std::size_t from = 0; from < S; ++from) {
                if (V[from] == inf) continue;
                const double v = V[from] + trans(from, to);
                if (v < best) {
                    best = v;
                    who = from;
                }
            }
            W[to] = best + sc[to * T + (t - 1)];
            arg[(t - 1) * S + to] = who;
        }
        V.swap(W);
    }
    OracleResult res;
    std::size_t s = 0;
    res.cost = inf;
    for (std::size_t i = 0; i < S; ++i)
        if (V[i] < res.cost) {
            res.cost = V[i];
            s = i;
        }
    res.states.assign(T, 0);
    for (int t = T; t >= 1; --t) {
        res.states[t - 1] = s;
        s = arg[(t - 1) * S + s];
    }
    fill_trajectory(inst, sp, res);
    return res;
}

OracleResult exhaustive_integer_opt(const Instance& inst, const OracleConfig& cfg) {
    const StateSpace sp = enumerate_states(inst, cfg);
    const int T = inst.horizon();
    if (std::pow(static_cast<double>(sp.count), T) > 1e7)
        throw OracleLimit("exhaustive oracle: too many trajectories");
    const std::vector<double> sc = slot_cost_table(inst, sp);
    std::vector<std::size_t> cur(T, 0);
    OracleResult res;
    res.cost = std::numeric_limits<double>::infinity();
    while (true) {
        double acc = 0.0;
        std::size_t prev = 0;
        for (int t = 1; t <= T; ++t) {
            acc = acc + sp.transition_cost(prev, cur[t - 1]);
            acc = acc + sc[cur[t - 1] * T + (t - 1)];
            prev = cur[t - 1];
        }
        if (acc < res.cost) {
            res.cost = acc;
            res.states = cur;
        }
        int i = T - 1;
        while (i >= 0 && ++cur[i] == sp.count) cur[i--] = 0;
        if (i < 0) break;
    }
    fill_trajectory(inst, sp, res);
    return res;
}

FractionalHorizon offline_fractional_opt(const Instance& inst, const SolverConfig& cfg) {
    return solve_fractional_horizon(inst, cfg);
}

}  // namespace edgeplace
