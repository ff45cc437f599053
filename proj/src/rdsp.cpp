#include "edgeplace/rdsp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace edgeplace {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct Graph {
    int M = 0;
    // adjacency: (neighbor vertex, edge index); services are vertices M + k
    std::vector<std::vector<std::pair<int, int>>> adj;
};

Graph build_graph(const RoundingState& s) {
    Graph g;
    g.M = static_cast<int>(s.x.rows());
    g.adj.resize(s.x.rows() + s.x.cols());
    for (int e = 0; e < static_cast<int>(s.edges.size()); ++e) {
        const Edge& ed = s.edges[e];
        g.adj[ed.m].emplace_back(g.M + ed.k, e);
        g.adj[g.M + ed.k].emplace_back(ed.m, e);
    }
    return g;
}

MatchingPair alternate(const RoundingState& s, const std::vector<int>& walk, bool cycle) {
    MatchingPair mp;
    mp.cycle = cycle;
    for (size_t i = 0; i < walk.size(); ++i) (i % 2 == 0 ? mp.L1 : mp.L2).push_back(s.edges[walk[i]]);
    return mp;
}

}  // namespace

RoundingState RoundingState::from(const Matrix& x) {
    RoundingState s;
    s.x = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        double& v = s.x.data()[i];
        if (!std::isfinite(v)) throw std::invalid_argument("rdsp: non-finite placement value");
        if (v < -kFeasTol || v > 1.0 + kFeasTol) throw std::invalid_argument("rdsp: placement value outside [0, 1]");
        if (v <= kRoundSnap) v = 0.0;
        if (v >= 1.0 - kRoundSnap) v = 1.0;
    }
    s.refresh_edges();
    return s;
}

void RoundingState::refresh_edges() {
    edges.clear();
    for (int m = 0; m < x.rows(); ++m)
        for (int k = 0; k < x.cols(); ++k)
            if (x(m, k) > 0.0 && x(m, k) < 1.0) edges.push_back({m, k});
}

MatchingPair find_cycle_or_path(const RoundingState& s) {
    if (s.edges.empty()) throw std::invalid_argument("find_cycle_or_path: no fractional edges");
    const Graph g = build_graph(s);
    const int nv = static_cast<int>(g.adj.size());

    // Depth-first search for a back edge.
    std::vector<int> color(nv, 0), pos(nv, -1);
    for (int root = 0; root < nv; ++root) {
        if (color[root] != 0 || g.adj[root].empty()) continue;
        std::vector<int> stack{root}, entry_edge{-1}, cursor{0};
        color[root] = 1;
        pos[root] = 0;
        while (!stack.empty()) {
            const int v = stack.back();
            int& c = cursor.back();
            if (c == static_cast<int>(g.adj[v].size())) {
                color[v] = 2;
                pos[v] = -1;
                stack.pop_back();
                entry_edge.pop_back();
                cursor.pop_back();
                continue;
            }
            const auto [u, e] = g.adj[v][c++];
            if (e == entry_edge.back()) continue;
            if (color[u] == 1) {
                std::vector<int> walk(entry_edge.begin() + pos[u] + 1, entry_edge.end());
                walk.push_back(e);
                return alternate(s, walk, true);
            }
            if (color[u] == 0) {
                color[u] = 1;
                pos[u] = static_cast<int>(stack.size());
                stack.push_back(u);
                entry_edge.push_back(e);
                cursor.push_back(0);
            }
        }
    }

    // Forest: walk from a leaf until stuck, which ends at another leaf.
    int start = -1;
    for (int v = 0; v < nv && start < 0; ++v)
        if (g.adj[v].size() == 1) start = v;
    std::vector<bool> seen(nv, false);
    std::vector<int> walk;
    int cur = start;
    seen[cur] = true;
    for (bool moved = true; moved;) {
        moved = false;
        for (const auto& [u, e] : g.adj[cur])
            if (!seen[u]) {
                walk.push_back(e);
                seen[u] = true;
                cur = u;
                moved = true;
                break;
            }
    }
    return alternate(s, walk, false);
}

SlotRounding rdsp_round_slot(const Matrix& x_frac, std::mt19937_64& rng, const RoundingTrace& trace) {
    RoundingState s = RoundingState::from(x_frac);
    SlotRounding out;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int cap = static_cast<int>(x_frac.size());
    while (!s.edges.empty()) {
        if (s.iterations >= cap) throw std::logic_error("rdsp: iteration bound exceeded");
        RoundingStep step;
        step.iteration = ++s.iterations;
        step.pair = find_cycle_or_path(s);
        const auto& L1 = step.pair.L1;
        const auto& L2 = step.pair.L2;
        double xi = 1.0, om = 1.0;
        for (const Edge& e : L1) {
            xi = std::min(xi, 1.0 - s.x(e.m, e.k));
            om = std::min(om, s.x(e.m, e.k));
        }
        for (const Edge& e : L2) {
            xi = std::min(xi, s.x(e.m, e.k));
            om = std::min(om, 1.0 - s.x(e.m, e.k));
        }
        step.xi = xi;
        step.omega = om;
        step.probability = om / (om + xi);
        step.up = unif(rng) < step.probability;

        // vertices touched by one L1 and one L2 edge keep their sum
        std::vector<std::pair<int, double>> sums;
        auto vertex_sums = [&](bool record) {
            std::vector<int> deg1(s.x.rows() + s.x.cols(), 0), deg2(deg1.size(), 0);
            std::vector<double> sum(deg1.size(), 0.0);
            for (const Edge& e : L1) {
                ++deg1[e.m];
                ++deg1[s.x.rows() + e.k];
                sum[e.m] += s.x(e.m, e.k);
                sum[s.x.rows() + e.k] += s.x(e.m, e.k);
            }
            for (const Edge& e : L2) {
                ++deg2[e.m];
                ++deg2[s.x.rows() + e.k];
                sum[e.m] += s.x(e.m, e.k);
                sum[s.x.rows() + e.k] += s.x(e.m, e.k);
            }
            std::vector<std::pair<int, double>> res;
            for (size_t v = 0; v < sum.size(); ++v)
                if (deg1[v] == 1 && deg2[v] == 1) res.emplace_back(static_cast<int>(v), sum[v]);
            if (record) sums = res;
            return res;
        };
        vertex_sums(true);

        const double a = step.up ? xi : om;
        for (const Edge& e : L1) {
            double& v = s.x(e.m, e.k);
            if (step.up) v = (1.0 - v == a) ? 1.0 : v + a;
            else v = (v == a) ? 0.0 : v - a;
        }
        for (const Edge& e : L2) {
            double& v = s.x(e.m, e.k);
            if (step.up) v = (v == a) ? 0.0 : v - a;
            else v = (1.0 - v == a) ? 1.0 : v + a;
        }
        const auto after = vertex_sums(false);
        for (size_t i = 0; i < after.size(); ++i)
            step.vertex_drift = std::max(step.vertex_drift, std::abs(after[i].second - sums[i].second));
        out.max_vertex_drift = std::max(out.max_vertex_drift, step.vertex_drift);
        if (trace) trace(step);
        s.refresh_edges();
    }
    out.x = s.x;
    out.iterations = s.iterations;
    return out;
}

std::mt19937_64 slot_rng(std::uint64_t seed, int t) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(t)));
}

CapacityRepair repair_capacity(const Matrix& x_bar, const Instance& inst, const Matrix& x_frac) {
    CapacityRepair out{x_bar, 0};
    for (int m = 0; m < inst.num_nodes(); ++m) {
        auto used = [&] {
            double u = 0.0;
            for (int k = 0; k < inst.num_services(); ++k) u += inst.service(k).storage * out.x(m, k);
            return u;
        };
        while (used() > inst.node(m).storage_cap + kFeasTol) {
            int victim = -1;
            for (int k = 0; k < inst.num_services(); ++k) {
                if (out.x(m, k) < 0.5) continue;
                if (victim < 0 || x_frac(m, k) < x_frac(m, victim) ||
                    (x_frac(m, k) == x_frac(m, victim) && inst.service(k).storage > inst.service(victim).storage))
                    victim = k;
            }
            out.x(m, victim) = 0.0;
            ++out.evictions;
        }
    }
    return out;
}

baselines::ScheduleResult repair_schedule(const Instance& inst, const Matrix& x_bar, int t) {
    return baselines::schedule_lp(inst, x_bar, t);
}

double competitive_ratio_r2(const Instance& inst) { return 2.0 + std::ceil(inst.max_placement_ratio()); }

RoundedRun round_trajectory(const Instance& inst, const SolutionTrajectory& frac, std::uint64_t seed) {
    const int T = inst.horizon();
    RoundedRun out;
    SolutionTrajectory& tr = out.trajectory;
    tr = SolutionTrajectory::zeros(inst);
    tr.integral = true;
    for (int t = 1; t <= T; ++t) {
        auto rng = slot_rng(seed, t);
        const SlotRounding sr = rdsp_round_slot(frac.x[t - 1], rng);
        out.max_iterations = std::max(out.max_iterations, sr.iterations);
        const CapacityRepair cr = repair_capacity(sr.x, inst, frac.x[t - 1]);
        out.evictions += cr.evictions;
        const auto sched = repair_schedule(inst, cr.x, t);
        tr.x[t - 1] = cr.x;
        tr.y[t - 1] = sched.y;
        tr.unserved[t - 1] = sched.unserved;
    }
    tr.fill_switching(zero_placement(inst));
    out.cost = compute_cost(inst, tr);
    return out;
}

std::string rounding_trace_csv(const Matrix& x_frac, std::mt19937_64& rng) {
    std::ostringstream os;
    os << "iteration,m,k,set,shift,probability\n";
    char buf[160];
    rdsp_round_slot(x_frac, rng, [&](const RoundingStep& st) {
        const double a = st.up ? st.xi : st.omega;
        for (int set = 1; set <= 2; ++set)
            for (const Edge& e : set == 1 ? st.pair.L1 : st.pair.L2) {
                const double shift = (set == 1) == st.up ? a : -a;
                std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%.17g,%.17g\n", st.iteration, e.m, e.k, set, shift,
                              st.probability);
                os << buf;
            }
    });
    return os.str();
}

}  // namespace edgeplace
