// edgeplace/simplex.hpp
//
// Dense tableau simplex for packing-form linear programs
//
//     minimize c'x   subject to  A x <= b,  x >= 0,   with b >= 0.
//
// b >= 0 makes the all-slack basis feasible, so a single phase suffices.
// Every per-slot scheduling LP in this project has that shape.

#pragma once

#include <Eigen/Dense>

namespace edgeplace::simplex {

enum class Status { Optimal, Unbounded, IterationLimit };

struct Result {
    Status status = Status::Optimal;
    Eigen::VectorXd x;
    double objective = 0.0;
    int pivots = 0;
};

/// Throws std::invalid_argument if b has a negative entry or shapes disagree.
Result solve_packing(const Eigen::VectorXd& c,
                     const Eigen::MatrixXd& A,
                     const Eigen::VectorXd& b,
                     int max_pivots = 100000);

}  // namespace edgeplace::simplex
