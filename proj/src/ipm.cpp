// Mehrotra predictor-corrector on the reduced (normal-equation) system
//
//   (H + V^-1 Z + G' S^-1 Lambda G) dv = rhs
//
// where H is the (diagonal) Hessian of the entropic terms.

#include "edgeplace/ipm.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>

namespace edgeplace::ipm {

double EntropicTerm::value(double v) const {
    const double u = v + shift;
    return weight * (u * std::log(u / (1.0 + shift)) - v);
}

double EntropicTerm::derivative(double v) const {
    return weight * std::log((v + shift) / (1.0 + shift));
}

double EntropicTerm::curvature(double v) const {
    return weight / (v + shift);
}

double Problem::objective(const Eigen::VectorXd& v) const {
    double f = cost.dot(v);
    for (const auto& e : entropic) f += e.value(v[e.var]);
    return f;
}

namespace {

Eigen::VectorXd gradient(const Problem& p, const Eigen::VectorXd& v) {
    Eigen::VectorXd g = p.cost;
    for (const auto& e : p.entropic) g[e.var] += e.derivative(v[e.var]);
    return g;
}

double residual_from(const Eigen::VectorXd& v, const Eigen::VectorXd& lambda,
                     const Eigen::VectorXd& slack_gap, const Eigen::VectorXd& bracket) {
    // slack_gap = h - Gv
    double r = 0.0;
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        r = std::max(r, -bracket[j]);
        r = std::max(r, std::abs(v[j] * bracket[j]));
        r = std::max(r, -v[j]);
    }
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        r = std::max(r, -slack_gap[i]);
        r = std::max(r, std::abs(lambda[i] * slack_gap[i]));
        r = std::max(r, -lambda[i]);
    }
    return r;
}

double max_step(const Eigen::VectorXd& x, const Eigen::VectorXd& dx) {
    double a = 1.0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (dx[i] < 0.0) a = std::min(a, -x[i] / dx[i]);
    return a;
}

}  // namespace

double kkt_residual(const Problem& p, const Eigen::VectorXd& v, const Eigen::VectorXd& lambda) {
    const Eigen::VectorXd bracket = gradient(p, v) + p.G.transpose() * lambda;
    const Eigen::VectorXd gap = p.h - p.G * v;
    return residual_from(v, lambda, gap, bracket);
}

Result solve(const Problem& p, const Options& opt) {
    const int n = p.num_vars();
    const int m = p.num_rows();
    const SparseMatrix Gt = p.G.transpose();

    Result best;
    best.residual = std::numeric_limits<double>::infinity();
    if (n == 0) {
        best.v = Eigen::VectorXd::Zero(0);
        best.row_dual = Eigen::VectorXd::Zero(m);
        best.bound_dual = Eigen::VectorXd::Zero(0);
        best.residual = m > 0 ? std::max(0.0, -p.h.minCoeff()) : 0.0;
        best.status = best.residual <= opt.tol ? Status::Converged : Status::NumericalFailure;
        return best;
    }

    Eigen::VectorXd v = Eigen::VectorXd::Constant(n, opt.initial_value);
    Eigen::VectorXd s = (p.h - p.G * v).cwiseMax(1.0);
    Eigen::VectorXd lam = Eigen::VectorXd::Ones(m);
    Eigen::VectorXd zl = Eigen::VectorXd::Ones(n);

    const bool linear = p.entropic.empty();
    Eigen::SimplicialLDLT<SparseMatrix> ldlt;
    Eigen::Index analyzed_nnz = -1;

    SparseMatrix diag(n, n);
    diag.setIdentity();

    Eigen::VectorXd hess(n), dv, ds, dl, dz, dv_a, ds_a, dl_a, dz_a;
    Status status = Status::IterationLimit;
    int it = 0;
    for (;; ++it) {
        const Eigen::VectorXd grad = gradient(p, v);
        const Eigen::VectorXd Gv = p.G * v;
        const Eigen::VectorXd bracket = grad + Gt * lam;
        const Eigen::VectorXd r_d = bracket - zl;
        const Eigen::VectorXd r_p = Gv + s - p.h;
        const double res = residual_from(v, lam, p.h - Gv, bracket);
        if (res < best.residual) {
            best.residual = res;
            best.v = v;
            best.row_dual = lam;
            best.bound_dual = bracket.cwiseMax(0.0);
            best.iterations = it;
        }
        if (res <= opt.tol) {
            status = Status::Converged;
            break;
        }
        if (it >= opt.max_iter) break;

        const double mu = (s.dot(lam) + v.dot(zl)) / static_cast<double>(m + n);

        hess.setZero();
        for (const auto& e : p.entropic) hess[e.var] += e.curvature(v[e.var]);
        const Eigen::VectorXd w = lam.cwiseQuotient(s);
        for (int j = 0; j < n; ++j) diag.coeffRef(j, j) = hess[j] + zl[j] / v[j];
        SparseMatrix K = Gt * w.asDiagonal() * p.G;
        K += diag;
        if (K.nonZeros() != analyzed_nnz) {
            ldlt.analyzePattern(K);
            analyzed_nnz = K.nonZeros();
        }
        ldlt.factorize(K);
        if (ldlt.info() != Eigen::Success) {
            status = Status::NumericalFailure;
            break;
        }

        auto newton = [&](const Eigen::VectorXd& rc_s, const Eigen::VectorXd& rc_v,
                          Eigen::VectorXd& ndv, Eigen::VectorXd& nds,
                          Eigen::VectorXd& ndl, Eigen::VectorXd& ndz) {
            const Eigen::VectorXd rhs = -r_d - rc_v.cwiseQuotient(v)
                                        - Gt * (lam.cwiseProduct(r_p) - rc_s).cwiseQuotient(s);
            ndv = ldlt.solve(rhs);
            // one step of iterative refinement
            const Eigen::VectorXd fix = rhs - K * ndv;
            ndv += ldlt.solve(fix);
            nds = -r_p - p.G * ndv;
            ndl = (-rc_s - lam.cwiseProduct(nds)).cwiseQuotient(s);
            ndz = -(rc_v + zl.cwiseProduct(ndv)).cwiseQuotient(v);
        };

        newton(s.cwiseProduct(lam), v.cwiseProduct(zl), dv_a, ds_a, dl_a, dz_a);
        double ap = std::min(max_step(v, dv_a), max_step(s, ds_a));
        double ad = std::min(max_step(lam, dl_a), max_step(zl, dz_a));
        if (!linear) ap = ad = std::min(ap, ad);
        const double mu_aff = ((s + ap * ds_a).dot(lam + ad * dl_a) + (v + ap * dv_a).dot(zl + ad * dz_a))
                              / static_cast<double>(m + n);
        const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

        const Eigen::VectorXd rc_s = (s.cwiseProduct(lam) + ds_a.cwiseProduct(dl_a)).array() - sigma * mu;
        const Eigen::VectorXd rc_v = (v.cwiseProduct(zl) + dv_a.cwiseProduct(dz_a)).array() - sigma * mu;
        newton(rc_s, rc_v, dv, ds, dl, dz);

        const double tau = std::max(0.99, 1.0 - mu);
        ap = std::min(1.0, tau * std::min(max_step(v, dv), max_step(s, ds)));
        ad = std::min(1.0, tau * std::min(max_step(lam, dl), max_step(zl, dz)));
        if (!linear) ap = ad = std::min(ap, ad);
        if (!(ap > 0.0) || !(ad > 0.0) || !dv.allFinite()) {
            status = Status::NumericalFailure;
            break;
        }
        v += ap * dv;
        s += ap * ds;
        lam += ad * dl;
        zl += ad * dz;
    }

    best.status = status == Status::Converged ? Status::Converged
                  : best.residual <= opt.tol  ? Status::Converged
                                              : status;
    best.objective = p.objective(best.v);
    if (status != Status::Converged) best.iterations = it;
    return best;
}

}  // namespace edgeplace::ipm
