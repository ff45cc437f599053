// Dense single-phase simplex for packing LPs. Dantzig pricing, falling back
// to Bland's rule after a run of degenerate pivots to rule out cycling.

#include "edgeplace/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace edgeplace::simplex {

namespace {
constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-11;
constexpr int kDegenerateRunBeforeBland = 50;
}  // namespace

Result solve_packing(const Eigen::VectorXd& c,
                     const Eigen::MatrixXd& A,
                     const Eigen::VectorXd& b,
                     int max_pivots) {
    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    if (c.size() != n || b.size() != m)
        throw std::invalid_argument("simplex: shape mismatch");
    for (int i = 0; i < m; ++i)
        if (!(b[i] >= 0.0)) throw std::invalid_argument("simplex: rhs must be >= 0");

    Result res;
    res.x = Eigen::VectorXd::Zero(n);
    if (n == 0) return res;

    // Tableau columns: n structural, m slack, rhs. Row m holds reduced costs.
    const int width = n + m + 1;
    std::vector<double> tab(static_cast<size_t>(m + 1) * width, 0.0);
    auto at = [&](int i, int j) -> double& { return tab[static_cast<size_t>(i) * width + j]; };
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) at(i, j) = A(i, j);
        at(i, n + i) = 1.0;
        at(i, width - 1) = b[i];
    }
    for (int j = 0; j < n; ++j) at(m, j) = c[j];

    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = n + i;

    int degenerate_run = 0;
    while (true) {
        const bool bland = degenerate_run >= kDegenerateRunBeforeBland;
        int enter = -1;
        double best = -kCostTol;
        for (int j = 0; j < n + m; ++j) {
            const double rc = at(m, j);
            if (rc < -kCostTol) {
                if (bland) { enter = j; break; }
                if (rc < best) { best = rc; enter = j; }
            }
        }
        if (enter < 0) break;

        int leave = -1;
        double ratio = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
            const double a = at(i, enter);
            if (a > kPivotTol) {
                const double q = at(i, width - 1) / a;
                if (q < ratio - 1e-14 || (std::abs(q - ratio) <= 1e-14 && leave >= 0 && basis[i] < basis[leave])) {
                    ratio = q;
                    leave = i;
                }
            }
        }
        if (leave < 0) {
            res.status = Status::Unbounded;
            return res;
        }
        if (++res.pivots > max_pivots) {
            res.status = Status::IterationLimit;
            break;
        }
        degenerate_run = ratio <= 1e-14 ? degenerate_run + 1 : 0;

        const double piv = at(leave, enter);
        for (int j = 0; j < width; ++j) at(leave, j) /= piv;
        at(leave, enter) = 1.0;
        for (int i = 0; i <= m; ++i) {
            if (i == leave) continue;
            const double f = at(i, enter);
            if (f == 0.0) continue;
            double* row = &at(i, 0);
            const double* prow = &at(leave, 0);
            for (int j = 0; j < width; ++j) row[j] -= f * prow[j];
            row[enter] = 0.0;
        }
        basis[leave] = enter;
    }

    for (int i = 0; i < m; ++i) {
        if (basis[i] < n) res.x[basis[i]] = std::max(0.0, at(i, width - 1));
    }
    res.objective = c.dot(res.x);
    return res;
}

}  // namespace edgeplace::simplex
