// edgeplace/episode.hpp
//
// One regularized episode program over a window of slots [first, last]:
//
//   sum_s sum_{m,k} l x(s)  +  sum_s sum d lambda y(s)
//   + (b/eta) ln((1+delta)/(x_prev+delta)) x(first)            head, linear
//   + sum_{s>first} b z(s)
//   + (b/eta) [ (x(last)+delta) ln((x(last)+delta)/(1+delta)) - x(last) ]   tail
//
// with eta = ln(1 + MK/eps), delta = eps/MK. The head term is dropped when the
// nominal start is <= 0 (then z(first) is a variable and x(first - 1) = x_prev),
// the tail term when the nominal end reaches T.
//
// Duals follow the usual naming: theta (y <= x), alpha (coverage), beta
// (switching), rho (storage), mu (bandwidth). beta carries W + 1 slots: beta[0]
// belongs to the first slot and beta[W] to the slot after the window; both ends
// are synthesized from the regularizers when those are present.

#pragma once

#include "edgeplace/model.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace edgeplace {

class InfeasibleWindow : public std::runtime_error {
public:
    InfeasibleWindow(std::string constraint_class, int slot, const std::string& what)
        : std::runtime_error(what), class_(std::move(constraint_class)), slot_(slot) {}
    /// "coverage", "storage", "bandwidth", or "storage/bandwidth" when only
    /// the joint per-node limits fail.
    const std::string& constraint_class() const { return class_; }
    int slot() const { return slot_; }

private:
    std::string class_;
    int slot_;
};

class SolverFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// ln(1 + MK/eps).
double regularizer_eta(double MK, double eps);

struct EpisodeProblem {
    const Instance* inst = nullptr;
    int t_start = 1;  // nominal start, may be <= 0
    int L = 0;
    int first = 1;    // clipped window
    int last = 1;
    Matrix x_prev;    // x(first - 1), clamped to [0, 1]
    bool head = true;
    bool tail = true;
    double eps = 0.3;
    double eta = 0.0;
    double delta = 0.0;

    int window() const { return last - first + 1; }
    /// (b/eta) ln((1+delta)/(x_prev+delta)), the head coefficient and beta[0].
    Matrix head_coefficient() const;
};

/// Throws std::invalid_argument if the window misses [1, T] or eps <= 0.
EpisodeProblem build_episode(const Instance& inst, int t_start, int L, const Matrix& x_prev, double eps);

struct DualCertificate {
    int first = 1;
    std::vector<std::vector<double>> theta;  // [w][route]
    std::vector<std::vector<double>> alpha;  // [w][demand]
    std::vector<Matrix> beta;                // [w], w = 0..W
    std::vector<Vector> rho;                 // [w], length M
    std::vector<Vector> mu;                  // [w], length M

    int window() const { return static_cast<int>(rho.size()); }
    /// sum alpha - sum rho R - sum mu C.
    double dual_objective(const Instance& inst) const;
};

struct EpisodeSolution {
    int first = 1;
    int last = 1;
    std::vector<Matrix> x;               // [w]
    std::vector<std::vector<double>> y;  // [w][route]
    std::vector<Matrix> z;               // [w]; zero where no variable exists
    double objective = 0.0;
    DualCertificate cert;
    double kkt_residual = 0.0;
    bool converged = false;
    int iterations = 0;
};

struct SolverConfig {
    double tol = 1e-6;
    int max_iter = 200;
};

/// Throws InfeasibleWindow when some slot of the window has no relaxed
/// feasible point. Non-convergence is reported through `converged`.
EpisodeSolution solve_episode(const EpisodeProblem& prob, const SolverConfig& cfg = {});

/// Episode objective at an arbitrary primal point laid out like EpisodeSolution.
double episode_objective(const EpisodeProblem& prob, const EpisodeSolution& point);

struct KktReport {
    double stationarity_x = 0.0;  // max(-bracket_x)
    double stationarity_y = 0.0;
    double stationarity_z = 0.0;  // max(beta - b)
    double complementarity = 0.0; // max |primal * dual slack|
    double primal = 0.0;          // max constraint violation
    double dual_sign = 0.0;       // max(-dual)

    double max() const;
};

KktReport episode_kkt(const EpisodeProblem& prob, const EpisodeSolution& sol);

/// Every stationarity bracket and complementarity product as CSV rows
/// `kind,t,index,value`.
std::string episode_kkt_csv(const EpisodeProblem& prob, const EpisodeSolution& sol);

struct FractionalHorizon {
    SolutionTrajectory trajectory;
    double objective = 0.0;
    EpisodeSolution solution;
};

/// Full-horizon relaxation with true switching costs (a linear program).
FractionalHorizon solve_fractional_horizon(const Instance& inst, const SolverConfig& cfg = {});

}  // namespace edgeplace
