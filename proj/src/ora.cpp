#include "edgeplace/ora.hpp"

#include "edgeplace/parallel.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace edgeplace {

std::vector<EpisodeWindow> enumerate_episodes(int T, int L, int pi) {
    if (T < 1 || L < 0 || pi < 0 || pi > L) throw std::invalid_argument("enumerate_episodes: need T >= 1, 0 <= pi <= L");
    std::vector<EpisodeWindow> out;
    const int vmax = (T + L) / (L + 1);  // ceil(T / (L+1))
    for (int v = -1; v <= vmax; ++v) {
        const int s = pi + (L + 1) * v;
        const int first = std::max(1, s), last = std::min(T, s + L);
        if (first <= last) out.push_back({s, first, last});
    }
    return out;
}

double competitive_ratio_r1(double MK, double ceil_r, int L, double eps) {
    const double eta = regularizer_eta(MK, eps);
    return 1.0 + 3.0 * eta * (1.0 + eps / MK) * ceil_r / (L + 1);
}

double competitive_ratio_r1(const Instance& inst, int L, double eps) {
    const double MK = static_cast<double>(inst.num_nodes()) * inst.num_services();
    return competitive_ratio_r1(MK, std::ceil(inst.max_placement_ratio()), L, eps);
}

OraRun run_ora(const Instance& inst, const OraConfig& cfg) {
    if (cfg.L < 0) throw std::invalid_argument("run_ora: L must be >= 0");
    const int T = inst.horizon(), V = cfg.L + 1;
    OraRun run;
    run.L = cfg.L;
    run.eps = cfg.eps;
    run.versions.resize(V);
    run.episodes.resize(V);

    parallel_for(V, cfg.jobs, [&](int pi) {
        SolutionTrajectory tr = SolutionTrajectory::zeros(inst);
        tr.unserved.assign(T, {});
        Matrix prev = zero_placement(inst);
        for (const auto& ep : enumerate_episodes(T, cfg.L, pi)) {
            OraEpisode oe;
            oe.version = pi;
            oe.problem = build_episode(inst, ep.t_start, cfg.L, prev, cfg.eps);
            try {
                oe.solution = solve_episode(oe.problem, cfg.solver);
            } catch (const InfeasibleWindow& e) {
                throw InfeasibleWindow(e.constraint_class(), e.slot(),
                                       "version " + std::to_string(pi) + ", episode start " +
                                           std::to_string(ep.t_start) + ": " + e.what());
            }
            for (int w = 0; w < oe.problem.window(); ++w) {
                const int t = ep.first + w;
                tr.x[t - 1] = oe.solution.x[w];
                tr.y[t - 1] = oe.solution.y[w];
                tr.z[t - 1] = oe.solution.z[w];
            }
            prev = oe.solution.x.back();
            run.episodes[pi].push_back(std::move(oe));
        }
        run.versions[pi] = std::move(tr);
    });

    SolutionTrajectory& avg = run.averaged;
    avg = SolutionTrajectory::zeros(inst);
    avg.unserved.assign(T, {});
    for (int t = 0; t < T; ++t) {
        for (int pi = 0; pi < V; ++pi) {
            avg.x[t] += run.versions[pi].x[t];
            for (size_t r = 0; r < avg.y[t].size(); ++r) avg.y[t][r] += run.versions[pi].y[t][r];
        }
        avg.x[t] /= V;
        for (double& v : avg.y[t]) v /= V;
    }
    avg.fill_switching(zero_placement(inst));
    run.cost = compute_cost(inst, avg);
    for (const auto& eps : run.episodes)
        for (const auto& e : eps) {
            run.max_kkt_residual = std::max(run.max_kkt_residual, e.solution.kkt_residual);
            run.all_converged = run.all_converged && e.solution.converged;
        }
    return run;
}

std::string version_csv(const OraRun& run, int pi) {
    std::ostringstream os;
    os << "t,m,k,x\n";
    const auto& tr = run.versions.at(pi);
    char buf[96];
    for (size_t t = 0; t < tr.x.size(); ++t)
        for (Eigen::Index m = 0; m < tr.x[t].rows(); ++m)
            for (Eigen::Index k = 0; k < tr.x[t].cols(); ++k) {
                std::snprintf(buf, sizeof buf, "%zu,%ld,%ld,%.17g\n", t + 1, static_cast<long>(m),
                              static_cast<long>(k), tr.x[t](m, k));
                os << buf;
            }
    return os.str();
}

}  // namespace edgeplace
