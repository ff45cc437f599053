#include "edgeplace/diagnostics.hpp"

#include "edgeplace/rdsp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace edgeplace {

double DualFeasibility::max() const { return std::max({placement, scheduling, switching, sign}); }

DualFeasibility check_dual_feasibility(const DualCertificate& c, const Instance& inst, const EpisodeProblem& p) {
    const int M = inst.num_nodes(), K = inst.num_services(), W = p.window();
    if (c.window() != W || static_cast<int>(c.beta.size()) != W + 1)
        throw DimensionMismatch("check_dual_feasibility: certificate does not match the window");
    DualFeasibility rep;
    auto bump = [](double& slot, double v) { slot = std::max(slot, v); };
    const Matrix& l = inst.storage_cost();
    const Matrix& b = inst.placement_cost();
    for (int w = 0; w < W; ++w) {
        const int t = p.first + w;
        const auto dem = inst.demands(t);
        Matrix theta_sum = Matrix::Zero(M, K);
        for (int d = 0; d < static_cast<int>(dem.size()); ++d) {
            const int k = dem[d].service;
            const double cl = inst.service(k).bandwidth * dem[d].lambda;
            bump(rep.sign, -c.alpha[w][d]);
            for (int r = inst.route_begin(t, d); r < inst.route_begin(t, d + 1); ++r) {
                const Link& lk = inst.link(inst.route_link(t, r));
                const double th = c.theta[w][r];
                theta_sum(lk.node, k) += th;
                bump(rep.sign, -th);
                bump(rep.scheduling, -(lk.weight * dem[d].lambda + th + cl * c.mu[w][lk.node] - c.alpha[w][d]));
            }
        }
        for (int m = 0; m < M; ++m) {
            bump(rep.sign, -c.rho[w][m]);
            bump(rep.sign, -c.mu[w][m]);
            for (int k = 0; k < K; ++k) {
                const double bx = l(m, k) + inst.service(k).storage * c.rho[w][m] + c.beta[w](m, k) -
                                  c.beta[w + 1](m, k) - theta_sum(m, k);
                bump(rep.placement, -bx);
            }
        }
    }
    for (int w = 0; w <= W; ++w) {
        bump(rep.switching, (c.beta[w] - b).maxCoeff());
        bump(rep.sign, -c.beta[w].minCoeff());
    }
    return rep;
}

GapTerms gap_terms(const EpisodeProblem& p, const EpisodeSolution& s) {
    const Instance& inst = *p.inst;
    const Matrix& b = inst.placement_cost();
    GapTerms g;
    if (p.head) {
        const Matrix hc = p.head_coefficient();
        g.omega = (b.array() * (s.x.front() - p.x_prev).cwiseMax(0.0).array()).sum();
        g.phi = -(hc.array() * s.x.front().array()).sum();
    }
    if (p.tail) {
        const Matrix& x = s.x.back();
        for (Eigen::Index m = 0; m < x.rows(); ++m)
            for (Eigen::Index k = 0; k < x.cols(); ++k)
                g.psi += b(m, k) / p.eta * x(m, k) * std::log((1.0 + p.delta) / (x(m, k) + p.delta));
    }
    return g;
}

double episode_primal_cost(const EpisodeProblem& p, const EpisodeSolution& s) {
    const Instance& inst = *p.inst;
    const Matrix& b = inst.placement_cost();
    double C = 0.0;
    for (int w = 0; w < p.window(); ++w) {
        const int t = p.first + w;
        C += (inst.storage_cost().array() * s.x[w].array()).sum();
        const auto dem = inst.demands(t);
        for (int d = 0; d < static_cast<int>(dem.size()); ++d)
            for (int r = inst.route_begin(t, d); r < inst.route_begin(t, d + 1); ++r)
                C += inst.link(inst.route_link(t, r)).weight * dem[d].lambda * s.y[w][r];
        const Matrix& prev = w == 0 ? p.x_prev : s.x[w - 1];
        C += (b.array() * (s.x[w] - prev).cwiseMax(0.0).array()).sum();
    }
    return C;
}

bool GapReport::pass(double) const { return residual <= 1e-4 * std::max(1.0, std::abs(C)); }

GapReport episode_gap_identity(const EpisodeProblem& p, const EpisodeSolution& s) {
    if (s.first != p.first || s.last != p.last || s.cert.window() != p.window())
        throw DimensionMismatch("episode_gap_identity: solution does not match the problem window");
    GapReport g;
    g.head = p.head;
    g.tail = p.tail;
    g.C = episode_primal_cost(p, s);
    g.D = s.cert.dual_objective(*p.inst);
    g.terms = gap_terms(p, s);
    g.residual = std::abs(g.C - g.D - g.terms.omega - g.terms.phi - g.terms.psi);
    return g;
}

double realized_ratio(double cost, double reference) {
    if (std::abs(reference) <= 1e-12) return std::abs(cost) <= 1e-12 ? 1.0 : std::numeric_limits<double>::infinity();
    return cost / reference;
}

nlohmann::json BoundReport::to_json() const {
    nlohmann::json j;
    j["C_ora"] = C_ora;
    j["D_ora"] = D_ora;
    j["P_opt"] = P_opt;
    if (have_opt) j["cost_opt"] = cost_opt;
    j["r1"] = r1;
    j["r2"] = r2;
    j["ora_ratio"] = ora_ratio;
    if (rdsp_samples > 0) {
        j["C_rdsp_mean"] = C_rdsp_mean;
        j["C_rdsp_sd"] = C_rdsp_sd;
        j["C_rdsp_min"] = C_rdsp_min;
        j["rdsp_samples"] = rdsp_samples;
        j["rdsp_ratio"] = rdsp_ratio;
    }
    nlohmann::json eps = nlohmann::json::array();
    for (const auto& e : episodes)
        eps.push_back({{"version", e.version}, {"t_start", e.t_start}, {"C", e.C}, {"D", e.D},
                       {"gap_residual", e.gap_residual}, {"dual_violation", e.dual_violation}});
    j["episodes"] = std::move(eps);
    j["violations"] = violations;
    j["pass"] = pass();
    return j;
}

BoundReport chain_check(const Instance& inst, const OraRun& run, const ChainInputs& in) {
    BoundReport rep;
    rep.C_ora = run.cost.cumulative;
    rep.P_opt = in.P_opt;
    rep.cost_opt = in.cost_opt;
    rep.have_opt = in.have_opt;
    rep.r1 = competitive_ratio_r1(inst, run.L, run.eps);
    rep.r2 = competitive_ratio_r2(inst);
    auto fail = [&](std::string s) { rep.violations.push_back(std::move(s)); };
    auto lp_slack = [](double v) { return 1e-5 * std::max(1.0, std::abs(v)); };

    double D_sum = 0.0;
    for (size_t pi = 0; pi < run.episodes.size(); ++pi) {
        double D_version = 0.0;
        for (const auto& e : run.episodes[pi]) {
            const GapReport g = episode_gap_identity(e.problem, e.solution);
            const DualFeasibility df = check_dual_feasibility(e.solution.cert, inst, e.problem);
            rep.episodes.push_back({static_cast<int>(pi), e.problem.t_start, g.C, g.D, g.residual, df.max()});
            D_version += g.D;
        }
        D_sum += D_version;
        if (D_version > in.P_opt + lp_slack(in.P_opt))
            fail("weak duality: version " + std::to_string(pi) + " dual " + std::to_string(D_version) +
                 " exceeds P_opt " + std::to_string(in.P_opt));
    }
    rep.D_ora = run.episodes.empty() ? 0.0 : D_sum / run.episodes.size();

    const double ref = in.have_opt ? in.cost_opt : in.P_opt;
    if (rep.C_ora < in.P_opt - lp_slack(in.P_opt)) fail("C_ora below P_opt");
    if (in.have_opt && in.P_opt > in.cost_opt + lp_slack(in.cost_opt)) fail("P_opt exceeds Cost_opt");
    if (rep.C_ora > rep.r1 * ref + lp_slack(ref)) fail("C_ora exceeds r1 * reference");
    rep.ora_ratio = realized_ratio(rep.C_ora, ref);

    const int n = static_cast<int>(in.rdsp_totals.size());
    rep.rdsp_samples = n;
    if (n > 0) {
        double mean = 0.0;
        for (double v : in.rdsp_totals) mean += v;
        mean /= n;
        double var = 0.0;
        for (double v : in.rdsp_totals) var += (v - mean) * (v - mean);
        const double sd = n > 1 ? std::sqrt(var / (n - 1)) : 0.0;
        rep.C_rdsp_mean = mean;
        rep.C_rdsp_sd = sd;
        rep.C_rdsp_min = *std::min_element(in.rdsp_totals.begin(), in.rdsp_totals.end());
        rep.rdsp_ratio = realized_ratio(mean, ref);
        const double allowance = 3.0 * sd / std::sqrt(static_cast<double>(n));
        if (in.have_opt && rep.C_rdsp_min < in.cost_opt - 1e-9 * std::max(1.0, in.cost_opt))
            fail("a rounded trajectory is cheaper than Cost_opt");
        if (mean > rep.r2 * rep.C_ora + allowance + 1e-9) fail("mean C_rdsp exceeds r2 * C_ora");
        if (mean > rep.r1 * rep.r2 * ref + allowance + 1e-9) fail("mean C_rdsp exceeds r1 * r2 * reference");
    }
    return rep;
}

}  // namespace edgeplace
