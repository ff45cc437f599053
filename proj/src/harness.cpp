#include "edgeplace/harness.hpp"

#include "edgeplace/baselines.hpp"
#include "edgeplace/instance_io.hpp"
#include "edgeplace/parallel.hpp"
#include "edgeplace/rdsp.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace edgeplace {

const std::vector<std::string>& algorithm_names() {
    static const std::vector<std::string> names{"greedy", "cache", "ora", "ora+rdsp", "offline-frac", "offline-int"};
    return names;
}

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
    std::uint64_t z = seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(trial) + 1;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

OraConfig ora_config(const RunConfig& cfg) {
    OraConfig oc;
    oc.L = cfg.L;
    oc.eps = cfg.eps;
    oc.solver.tol = cfg.tol;
    oc.jobs = cfg.jobs;
    return oc;
}

void mean_breakdown(const std::vector<CostBreakdown>& runs, CostBreakdown& out) {
    const size_t T = runs.front().total.size();
    const double n = static_cast<double>(runs.size());
    out = CostBreakdown{};
    for (auto* v : {&out.storage, &out.service, &out.dynamic, &out.overflow, &out.total}) v->assign(T, 0.0);
    for (const auto& r : runs)
        for (size_t t = 0; t < T; ++t) {
            out.storage[t] += r.storage[t] / n;
            out.service[t] += r.service[t] / n;
            out.dynamic[t] += r.dynamic[t] / n;
            out.overflow[t] += r.overflow[t] / n;
        }
    for (size_t t = 0; t < T; ++t) {
        out.total[t] = out.storage[t] + out.service[t] + out.dynamic[t];
        out.cumulative += out.total[t];
    }
}

std::vector<double> rounding_totals(const Instance& inst, const SolutionTrajectory& frac, const RunConfig& cfg,
                                    std::vector<CostBreakdown>* costs, int* evictions) {
    const int n = std::max(1, cfg.trials);
    std::vector<RoundedRun> runs(n);
    parallel_for(n, cfg.jobs, [&](int i) { runs[i] = round_trajectory(inst, frac, trial_seed(cfg.seed, i)); });
    std::vector<double> totals;
    for (auto& r : runs) {
        totals.push_back(r.cost.cumulative);
        if (costs) costs->push_back(std::move(r.cost));
        if (evictions) *evictions += r.evictions;
    }
    return totals;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

AlgorithmResult run_algorithm(const Instance& inst, const RunConfig& cfg) {
    AlgorithmResult res;
    res.alg = cfg.alg;
    if (cfg.alg == "greedy") {
        res.cost = baselines::greedy(inst).cost;
    } else if (cfg.alg == "cache") {
        res.cost = baselines::cache_only(inst).cost;
    } else if (cfg.alg == "ora" || cfg.alg == "ora+rdsp") {
        const OraRun run = run_ora(inst, ora_config(cfg));
        res.max_kkt_residual = run.max_kkt_residual;
        res.converged = run.all_converged;
        if (cfg.alg == "ora") {
            res.cost = run.cost;
        } else {
            res.randomized = true;
            std::vector<CostBreakdown> costs;
            res.trial_totals = rounding_totals(inst, run.averaged, cfg, &costs, &res.evictions);
            mean_breakdown(costs, res.cost);
        }
    } else if (cfg.alg == "offline-frac") {
        const auto fh = offline_fractional_opt(inst, {cfg.tol, 200});
        res.cost = compute_cost(inst, fh.trajectory);
        res.max_kkt_residual = fh.solution.kkt_residual;
    } else if (cfg.alg == "offline-int") {
        res.cost = compute_cost(inst, offline_integer_opt(inst, cfg.oracle).trajectory);
    } else {
        throw UnknownAlgorithm("unknown algorithm '" + cfg.alg + "'");
    }
    if (res.randomized) {
        const double n = static_cast<double>(res.trial_totals.size());
        for (double v : res.trial_totals) res.mean += v / n;
        double var = 0.0;
        for (double v : res.trial_totals) var += (v - res.mean) * (v - res.mean);
        res.stdev = n > 1 ? std::sqrt(var / (n - 1)) : 0.0;
    } else {
        res.mean = res.cost.cumulative;
    }
    return res;
}

Reference reference_cost(const Instance& inst, const RunConfig& cfg) {
    if (integer_opt_tractable(inst, cfg.oracle)) return {"offline-int", offline_integer_opt(inst, cfg.oracle).cost};
    return {"offline-frac", offline_fractional_opt(inst, {cfg.tol, 200}).objective};
}

nlohmann::json run_experiment(const Instance& inst, const RunConfig& cfg, const std::string& out_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    const AlgorithmResult res = run_algorithm(inst, cfg);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const Reference ref = reference_cost(inst, cfg);

    nlohmann::json s;
    s["algorithm"] = res.alg;
    s["total"] = res.total();
    s["C_R"] = res.cost.storage_sum();
    s["C_S"] = res.cost.service_sum();
    s["C_D"] = res.cost.dynamic_sum();
    s["overflow"] = res.cost.overflow_sum();
    s["reference"] = {{"kind", ref.kind}, {"value", ref.value}};
    s["ratio"] = realized_ratio(res.total(), ref.value);
    s["seed"] = cfg.seed;
    s["L"] = cfg.L;
    s["eps"] = cfg.eps;
    s["tol"] = cfg.tol;
    s["r1"] = competitive_ratio_r1(inst, cfg.L, cfg.eps);
    s["r2"] = competitive_ratio_r2(inst);
    if (res.randomized) {
        s["trials"] = res.trial_totals.size();
        s["mean"] = res.mean;
        s["stdev"] = res.stdev;
        s["evictions"] = res.evictions;
        nlohmann::json seeds = nlohmann::json::array();
        for (size_t i = 0; i < res.trial_totals.size(); ++i) seeds.push_back(trial_seed(cfg.seed, static_cast<int>(i)));
        s["trial_seeds"] = std::move(seeds);
    }
    if (cfg.alg == "ora" || cfg.alg == "ora+rdsp") {
        s["max_kkt_residual"] = res.max_kkt_residual;
        s["converged"] = res.converged;
    }
    if (cfg.timing) s["wall_time_s"] = wall;

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        save_instance(inst, out_dir + "/instance.json");
        std::ofstream(out_dir + "/perslot.csv") << cost_csv(res.cost);
        std::ofstream(out_dir + "/summary.json") << s.dump(2) << '\n';
    }
    return s;
}

std::vector<SweepRow> sweep(const SweepConfig& cfg) {
    const std::string& p = cfg.parameter;
    static const std::vector<std::string> known{"K", "N", "M", "L", "eps", "R", "C", "RC"};
    if (std::find(known.begin(), known.end(), p) == known.end())
        throw std::invalid_argument("sweep: unknown parameter '" + p + "'");
    for (const auto& a : cfg.algs)
        if (std::find(algorithm_names().begin(), algorithm_names().end(), a) == algorithm_names().end())
            throw UnknownAlgorithm("unknown algorithm '" + a + "'");

    const int nv = static_cast<int>(cfg.values.size()), ns = static_cast<int>(cfg.seeds.size());
    const bool same_instance = p == "L" || p == "eps";
    std::vector<Reference> shared_ref(ns);
    if (same_instance) {
        parallel_for(ns, cfg.run.jobs, [&](int si) {
            const Instance inst = generate(cfg.base, cfg.seeds[si]);
            shared_ref[si] = reference_cost(inst, cfg.run);
        });
    }

    std::vector<std::vector<SweepRow>> points(nv * ns);
    parallel_for(nv * ns, cfg.run.jobs, [&](int idx) {
        const int vi = idx / ns, si = idx % ns;
        const double v = cfg.values[vi];
        GeneratorConfig g = cfg.base;
        RunConfig rc = cfg.run;
        rc.jobs = 1;
        rc.seed = cfg.seeds[si];
        if (p == "K") g.K = static_cast<int>(v);
        if (p == "N") g.N = static_cast<int>(v), g.links = std::max(g.links, g.N);
        if (p == "M") g.M = static_cast<int>(v);
        if (p == "L") rc.L = static_cast<int>(v);
        if (p == "eps") rc.eps = v;
        Instance inst = generate(g, cfg.seeds[si]);
        if (p == "R") inst = inst.with_capacity_scale(v, 1.0);
        if (p == "C") inst = inst.with_capacity_scale(1.0, v);
        if (p == "RC") inst = inst.with_capacity_scale(v, v);
        const Reference ref = same_instance ? shared_ref[si] : reference_cost(inst, rc);
        for (const auto& a : cfg.algs) {
            rc.alg = a;
            const AlgorithmResult r = run_algorithm(inst, rc);
            SweepRow row;
            row.parameter = p;
            row.value = v;
            row.seed = cfg.seeds[si];
            row.alg = a;
            row.total = r.total();
            row.reference = ref.value;
            row.reference_kind = ref.kind;
            row.ratio = realized_ratio(r.total(), ref.value);
            row.r1 = competitive_ratio_r1(inst, rc.L, rc.eps);
            points[idx].push_back(row);
        }
    });
    std::vector<SweepRow> rows;
    for (auto& pt : points)
        for (auto& r : pt) rows.push_back(std::move(r));
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "parameter,value,seed,algorithm,total,reference_kind,reference,ratio,r1\n";
    for (const auto& r : rows)
        os << r.parameter << ',' << fmt(r.value) << ',' << r.seed << ',' << r.alg << ',' << fmt(r.total) << ','
           << r.reference_kind << ',' << fmt(r.reference) << ',' << fmt(r.ratio) << ',' << fmt(r.r1) << '\n';
    return os.str();
}

BoundReport verify(const Instance& inst, const RunConfig& cfg) {
    const OraRun run = run_ora(inst, ora_config(cfg));
    ChainInputs in;
    in.P_opt = offline_fractional_opt(inst, {std::min(cfg.tol, 1e-8), 300}).objective;
    in.have_opt = integer_opt_tractable(inst, cfg.oracle);
    if (in.have_opt) in.cost_opt = offline_integer_opt(inst, cfg.oracle).cost;
    in.rdsp_totals = rounding_totals(inst, run.averaged, cfg, nullptr, nullptr);
    BoundReport rep = chain_check(inst, run, in);
    for (const auto& row : rep.episodes) {
        if (row.dual_violation > 10.0 * cfg.tol)
            rep.violations.push_back("dual infeasible episode (version " + std::to_string(row.version) + ", start " +
                                     std::to_string(row.t_start) + ")");
        if (row.gap_residual > 1e-4 * std::max(1.0, std::abs(row.C)))
            rep.violations.push_back("gap identity residual (version " + std::to_string(row.version) + ", start " +
                                     std::to_string(row.t_start) + ")");
    }
    const auto cons = check_constraints(inst, run.averaged);
    if (cons.max() > kFeasTol) rep.violations.push_back("averaged trajectory violates the relaxed constraints");
    return rep;
}

}  // namespace edgeplace
