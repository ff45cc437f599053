// edgeplace/diagnostics.hpp
//
// Runtime checks of the primal-dual structure behind the online algorithm:
// dual feasibility of episode certificates, the per-episode gap identity
//   C = D + sum Omega + sum phi + sum psi,
// and the horizon-level bound chain against offline optima.

#pragma once

#include "edgeplace/ora.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace edgeplace {

struct DualFeasibility {
    double placement = 0.0;   // max(-(l + r rho + beta(t) - beta(t+1) - sum theta))
    double scheduling = 0.0;  // max(-(d lambda + theta + c lambda mu - alpha))
    double switching = 0.0;   // max(beta - b)
    double sign = 0.0;        // max(-dual)

    double max() const;
    bool pass(double solver_tol) const { return max() <= 10.0 * solver_tol; }
};

/// Evaluates the dual constraints over prob's window, boundary betas included.
DualFeasibility check_dual_feasibility(const DualCertificate& cert, const Instance& inst, const EpisodeProblem& prob);

struct GapTerms {
    double omega = 0.0;  // sum b [x(first) - x_prev]^+
    double phi = 0.0;    // sum -(b/eta) x(first) ln((1+delta)/(x_prev+delta))
    double psi = 0.0;    // sum (b/eta) x(last) ln((1+delta)/(x(last)+delta))
};

GapTerms gap_terms(const EpisodeProblem& prob, const EpisodeSolution& sol);

/// Realized episode cost: storage + service + b [x(s) - x(s-1)]^+ over the
/// window, the first slot measured against x_prev.
double episode_primal_cost(const EpisodeProblem& prob, const EpisodeSolution& sol);

struct GapReport {
    double C = 0.0;
    double D = 0.0;
    GapTerms terms;
    double residual = 0.0;  // |C - D - omega - phi - psi|
    bool head = true;
    bool tail = true;

    bool pass(double solver_tol) const;
};

/// Clipped episodes drop Omega and phi (no head) or psi (no tail).
GapReport episode_gap_identity(const EpisodeProblem& prob, const EpisodeSolution& sol);

struct EpisodeRow {
    int version = 0;
    int t_start = 0;
    double C = 0.0;
    double D = 0.0;
    double gap_residual = 0.0;
    double dual_violation = 0.0;
};

struct BoundReport {
    std::vector<EpisodeRow> episodes;
    double C_ora = 0.0;
    double D_ora = 0.0;  // mean over versions of the concatenated dual value
    double P_opt = 0.0;
    double cost_opt = 0.0;
    bool have_opt = false;
    double C_rdsp_mean = 0.0;
    double C_rdsp_sd = 0.0;
    double C_rdsp_min = 0.0;
    int rdsp_samples = 0;
    double r1 = 0.0;
    double r2 = 0.0;
    double ora_ratio = 1.0;
    double rdsp_ratio = 1.0;
    std::vector<std::string> violations;

    bool pass() const { return violations.empty(); }
    nlohmann::json to_json() const;
};

/// 0/0 is 1.
double realized_ratio(double cost, double reference);

struct ChainInputs {
    double P_opt = 0.0;
    double cost_opt = 0.0;
    bool have_opt = true;
    std::vector<double> rdsp_totals;  // one per seeded rounding
};

/// Weak-duality and chain checks; `run` supplies C^ORA and the certificates.
BoundReport chain_check(const Instance& inst, const OraRun& run, const ChainInputs& in);

}  // namespace edgeplace
