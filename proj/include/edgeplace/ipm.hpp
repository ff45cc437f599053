// edgeplace/ipm.hpp
//
// Infeasible-start primal-dual interior point method (Mehrotra
// predictor-corrector) for
//
//     minimize   c'v + sum_{j in E} a_j [ (v_j + s_j) ln((v_j + s_j)/(1 + s_j)) - v_j ]
//     subject to G v <= h,   v >= 0,
//
// i.e. a linear program plus separable entropic terms. Rows carry slacks and
// are allowed to be infeasible until convergence; the sign constraint v >= 0
// is kept strictly satisfied by every iterate, which keeps the logarithms
// defined.
//
// Stopping uses an absolute KKT residual:
//   max( dual infeasibility  max(-(grad + G'lambda))^+,
//        primal infeasibility max(Gv - h)^+,
//        |v_j (grad + G'lambda)_j|,  |lambda_i (h - Gv)_i| ).

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <vector>

namespace edgeplace::ipm {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// a * [ (v + shift) ln((v + shift)/(1 + shift)) - v ], a >= 0, shift > 0.
struct EntropicTerm {
    int var = 0;
    double weight = 0.0;
    double shift = 1.0;

    double value(double v) const;
    double derivative(double v) const;
    double curvature(double v) const;
};

struct Problem {
    Eigen::VectorXd cost;
    std::vector<EntropicTerm> entropic;
    SparseMatrix G;
    Eigen::VectorXd h;

    int num_vars() const { return static_cast<int>(cost.size()); }
    int num_rows() const { return static_cast<int>(h.size()); }
    double objective(const Eigen::VectorXd& v) const;
};

struct Options {
    double tol = 1e-6;
    int max_iter = 200;
    double initial_value = 0.5;
};

enum class Status { Converged, IterationLimit, NumericalFailure };

struct Result {
    Status status = Status::Converged;
    Eigen::VectorXd v;
    Eigen::VectorXd row_dual;    // lambda >= 0, one per row of G
    Eigen::VectorXd bound_dual;  // multiplier of v >= 0
    double objective = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

/// KKT residual of an arbitrary (v, lambda) pair, as used for stopping.
double kkt_residual(const Problem& p, const Eigen::VectorXd& v, const Eigen::VectorXd& lambda);

Result solve(const Problem& p, const Options& opt = {});

}  // namespace edgeplace::ipm
