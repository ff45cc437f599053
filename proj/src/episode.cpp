#include "edgeplace/episode.hpp"

#include "edgeplace/ipm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace edgeplace {

double regularizer_eta(double MK, double eps) { return std::log1p(MK / eps); }

Matrix EpisodeProblem::head_coefficient() const {
    const Matrix& b = inst->placement_cost();
    Matrix out(b.rows(), b.cols());
    for (Eigen::Index m = 0; m < b.rows(); ++m)
        for (Eigen::Index k = 0; k < b.cols(); ++k)
            out(m, k) = b(m, k) / eta * std::log((1.0 + delta) / (x_prev(m, k) + delta));
    return out;
}

EpisodeProblem build_episode(const Instance& inst, int t_start, int L, const Matrix& x_prev, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("build_episode: eps must be > 0");
    if (L < 0) throw std::invalid_argument("build_episode: L must be >= 0");
    const int T = inst.horizon();
    EpisodeProblem p;
    p.inst = &inst;
    p.t_start = t_start;
    p.L = L;
    p.first = std::max(1, t_start);
    p.last = std::min(T, t_start + L);
    if (p.first > p.last) throw std::invalid_argument("build_episode: window lies outside [1, T]");
    if (x_prev.rows() != inst.num_nodes() || x_prev.cols() != inst.num_services())
        throw DimensionMismatch("build_episode: x_prev must be M x K");
    p.x_prev = x_prev.cwiseMax(0.0).cwiseMin(1.0);
    p.head = t_start > 0;
    p.tail = t_start + L < T;
    p.eps = eps;
    const double MK = static_cast<double>(inst.num_nodes()) * inst.num_services();
    p.eta = regularizer_eta(MK, eps);
    p.delta = eps / MK;
    return p;
}

double DualCertificate::dual_objective(const Instance& inst) const {
    double D = 0.0;
    for (const auto& a : alpha)
        for (double v : a) D += v;
    for (int w = 0; w < window(); ++w)
        for (int m = 0; m < inst.num_nodes(); ++m)
            D -= rho[w][m] * inst.node(m).storage_cap + mu[w][m] * inst.node(m).bandwidth_cap;
    return D;
}

namespace {

struct Layout {
    int M = 0, K = 0, W = 0;
    std::vector<int> ybase;
    std::vector<std::vector<int>> zvar;  // [w][m*K+k], -1 when absent
    int nvars = 0;

    int xv(int w, int m, int k) const { return w * M * K + m * K + k; }
};

Layout make_layout(const EpisodeProblem& p) {
    const Instance& inst = *p.inst;
    Layout lay;
    lay.M = inst.num_nodes();
    lay.K = inst.num_services();
    lay.W = p.window();
    int n = lay.W * lay.M * lay.K;
    for (int w = 0; w < lay.W; ++w) {
        lay.ybase.push_back(n);
        n += inst.num_routes(p.first + w);
    }
    lay.zvar.assign(lay.W, std::vector<int>(lay.M * lay.K, -1));
    for (int w = 0; w < lay.W; ++w) {
        if (w == 0 && p.head) continue;
        for (int m = 0; m < lay.M; ++m)
            for (int k = 0; k < lay.K; ++k)
                if (inst.placement_cost()(m, k) > 0.0) lay.zvar[w][m * lay.K + k] = n++;
    }
    lay.nvars = n;
    return lay;
}

enum class RowKind { Link, Cover, Switch, Storage, Bandwidth };

struct RowTag {
    RowKind kind;
    int w;
    int index;  // route, demand, m*K+k, or m
};

std::string classify_infeasible(const Instance& inst, int t) {
    for (const auto& d : inst.demands(t))
        if (inst.user_links(d.user).empty()) return "coverage";
    double need = 0.0, have = 0.0;
    for (const auto& d : inst.demands(t)) need += inst.service(d.service).bandwidth * d.lambda;
    for (const auto& nd : inst.nodes()) have += nd.bandwidth_cap;
    if (need > have + kFeasTol) return "bandwidth";
    double max_r = 0.0;
    for (const auto& nd : inst.nodes()) max_r = std::max(max_r, nd.storage_cap);
    for (const auto& d : inst.demands(t))
        if (inst.service(d.service).storage > max_r) return "storage";
    return "storage/bandwidth";
}

struct Entry {
    const char* kind;
    int t;
    int index;
    double value;
};

// Walks every KKT quantity. Stationarity brackets ("stat_*") must be >= 0,
// products ("comp_*") must vanish, violations ("prim_*") must be <= 0.
template <class F>
void visit_kkt(const EpisodeProblem& p, const EpisodeSolution& s, F&& emit) {
    const Instance& inst = *p.inst;
    const int M = inst.num_nodes(), K = inst.num_services(), W = p.window();
    const DualCertificate& c = s.cert;
    const Matrix& l = inst.storage_cost();
    const Matrix& b = inst.placement_cost();
    for (int w = 0; w < W; ++w) {
        const int t = p.first + w;
        const auto dem = inst.demands(t);
        const Matrix& x = s.x[w];
        Matrix theta_sum = Matrix::Zero(M, K);
        std::vector<double> bw(M, 0.0);
        for (int d = 0; d < static_cast<int>(dem.size()); ++d) {
            const int k = dem[d].service;
            const double cl = inst.service(k).bandwidth * dem[d].lambda;
            double served = 0.0;
            for (int r = inst.route_begin(t, d); r < inst.route_begin(t, d + 1); ++r) {
                const Link& lk = inst.link(inst.route_link(t, r));
                const double y = s.y[w][r];
                const double th = c.theta[w][r];
                theta_sum(lk.node, k) += th;
                served += y;
                bw[lk.node] += cl * y;
                const double by = lk.weight * dem[d].lambda + th + cl * c.mu[w][lk.node] - c.alpha[w][d];
                emit(Entry{"stat_y", t, r, by});
                emit(Entry{"comp_y", t, r, y * by});
                emit(Entry{"prim_link", t, r, y - x(lk.node, k)});
                emit(Entry{"comp_link", t, r, th * (x(lk.node, k) - y)});
                emit(Entry{"prim_nonneg", t, r, -y});
            }
            emit(Entry{"prim_cover", t, d, 1.0 - served});
            emit(Entry{"comp_cover", t, d, c.alpha[w][d] * (served - 1.0)});
        }
        for (int m = 0; m < M; ++m) {
            double used = 0.0;
            for (int k = 0; k < K; ++k) {
                const int i = m * K + k;
                used += inst.service(k).storage * x(m, k);
                const double bx = l(m, k) + inst.service(k).storage * c.rho[w][m] + c.beta[w](m, k) -
                                  c.beta[w + 1](m, k) - theta_sum(m, k);
                emit(Entry{"stat_x", t, i, bx});
                emit(Entry{"comp_x", t, i, x(m, k) * bx});
                emit(Entry{"prim_nonneg", t, i, -x(m, k)});
                emit(Entry{"stat_z", t, i, b(m, k) - c.beta[w](m, k)});
                const bool has_z = !(w == 0 && p.head) && b(m, k) > 0.0;
                if (has_z) {
                    const double prev = w == 0 ? p.x_prev(m, k) : s.x[w - 1](m, k);
                    const double z = s.z[w](m, k);
                    const double gap = x(m, k) - prev - z;
                    emit(Entry{"comp_z", t, i, z * (b(m, k) - c.beta[w](m, k))});
                    emit(Entry{"prim_switch", t, i, gap});
                    emit(Entry{"comp_switch", t, i, c.beta[w](m, k) * gap});
                    emit(Entry{"prim_nonneg", t, i, -z});
                }
            }
            emit(Entry{"prim_storage", t, m, used - inst.node(m).storage_cap});
            emit(Entry{"comp_storage", t, m, c.rho[w][m] * (inst.node(m).storage_cap - used)});
            emit(Entry{"prim_bandwidth", t, m, bw[m] - inst.node(m).bandwidth_cap});
            emit(Entry{"comp_bandwidth", t, m, c.mu[w][m] * (inst.node(m).bandwidth_cap - bw[m])});
        }
    }
}

}  // namespace

double KktReport::max() const {
    return std::max({stationarity_x, stationarity_y, stationarity_z, complementarity, primal, dual_sign});
}

KktReport episode_kkt(const EpisodeProblem& p, const EpisodeSolution& s) {
    KktReport rep;
    visit_kkt(p, s, [&](const Entry& e) {
        const char* k = e.kind;
        if (k[0] == 's') {
            double& slot = k[5] == 'x' ? rep.stationarity_x : k[5] == 'y' ? rep.stationarity_y : rep.stationarity_z;
            slot = std::max(slot, -e.value);
        } else if (k[0] == 'c') {
            rep.complementarity = std::max(rep.complementarity, std::abs(e.value));
        } else {
            rep.primal = std::max(rep.primal, e.value);
        }
    });
    const DualCertificate& c = s.cert;
    auto neg = [&](double v) { rep.dual_sign = std::max(rep.dual_sign, -v); };
    for (const auto& v : c.theta)
        for (double a : v) neg(a);
    for (const auto& v : c.alpha)
        for (double a : v) neg(a);
    for (const auto& v : c.beta) neg(v.size() ? v.minCoeff() : 0.0);
    for (const auto& v : c.rho) neg(v.size() ? v.minCoeff() : 0.0);
    for (const auto& v : c.mu) neg(v.size() ? v.minCoeff() : 0.0);
    return rep;
}

std::string episode_kkt_csv(const EpisodeProblem& p, const EpisodeSolution& s) {
    std::ostringstream os;
    os << "kind,t,index,value\n";
    char buf[128];
    visit_kkt(p, s, [&](const Entry& e) {
        std::snprintf(buf, sizeof buf, "%s,%d,%d,%.17g\n", e.kind, e.t, e.index, e.value);
        os << buf;
    });
    return os.str();
}

double episode_objective(const EpisodeProblem& p, const EpisodeSolution& s) {
    const Instance& inst = *p.inst;
    const int M = inst.num_nodes(), K = inst.num_services(), W = p.window();
    const Matrix& l = inst.storage_cost();
    const Matrix& b = inst.placement_cost();
    double f = 0.0;
    for (int w = 0; w < W; ++w) {
        const int t = p.first + w;
        f += (l.array() * s.x[w].array()).sum();
        const auto dem = inst.demands(t);
        for (int d = 0; d < static_cast<int>(dem.size()); ++d)
            for (int r = inst.route_begin(t, d); r < inst.route_begin(t, d + 1); ++r)
                f += inst.link(inst.route_link(t, r)).weight * dem[d].lambda * s.y[w][r];
        if (!(w == 0 && p.head))
            for (int m = 0; m < M; ++m)
                for (int k = 0; k < K; ++k)
                    if (b(m, k) > 0.0) f += b(m, k) * s.z[w](m, k);
    }
    if (p.head) f += (p.head_coefficient().array() * s.x[0].array()).sum();
    if (p.tail) {
        const Matrix& x = s.x[W - 1];
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k) {
                if (b(m, k) <= 0.0) continue;
                const double u = x(m, k) + p.delta;
                f += b(m, k) / p.eta * (u * std::log(u / (1.0 + p.delta)) - x(m, k));
            }
    }
    return f;
}

EpisodeSolution solve_episode(const EpisodeProblem& p, const SolverConfig& cfg) {
    if (!p.inst) throw std::invalid_argument("solve_episode: problem has no instance");
    const Instance& inst = *p.inst;
    const Layout lay = make_layout(p);
    const int M = lay.M, K = lay.K, W = lay.W;
    const Matrix& l = inst.storage_cost();
    const Matrix& b = inst.placement_cost();

    ipm::Problem prob;
    prob.cost = Eigen::VectorXd::Zero(lay.nvars);
    std::vector<Eigen::Triplet<double>> trip;
    std::vector<double> h;
    std::vector<RowTag> tags;
    auto row = [&](RowKind kind, int w, int index, double rhs) {
        h.push_back(rhs);
        tags.push_back({kind, w, index});
        return static_cast<int>(h.size()) - 1;
    };

    const Matrix head = p.head ? p.head_coefficient() : Matrix::Zero(M, K);
    for (int w = 0; w < W; ++w) {
        const int t = p.first + w;
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k) prob.cost[lay.xv(w, m, k)] = l(m, k) + (w == 0 ? head(m, k) : 0.0);

        const auto dem = inst.demands(t);
        std::vector<std::vector<std::pair<int, double>>> node_bw(M);
        for (int d = 0; d < static_cast<int>(dem.size()); ++d) {
            const int k = dem[d].service;
            const int cover = row(RowKind::Cover, w, d, -1.0);
            for (int r = inst.route_begin(t, d); r < inst.route_begin(t, d + 1); ++r) {
                const Link& lk = inst.link(inst.route_link(t, r));
                const int yv = lay.ybase[w] + r;
                prob.cost[yv] = lk.weight * dem[d].lambda;
                const int a = row(RowKind::Link, w, r, 0.0);
                trip.emplace_back(a, yv, 1.0);
                trip.emplace_back(a, lay.xv(w, lk.node, k), -1.0);
                trip.emplace_back(cover, yv, -1.0);
                node_bw[lk.node].emplace_back(yv, inst.service(k).bandwidth * dem[d].lambda);
            }
        }
        for (int m = 0; m < M; ++m) {
            const int st = row(RowKind::Storage, w, m, inst.node(m).storage_cap);
            for (int k = 0; k < K; ++k) trip.emplace_back(st, lay.xv(w, m, k), inst.service(k).storage);
            if (!node_bw[m].empty()) {
                const int bwr = row(RowKind::Bandwidth, w, m, inst.node(m).bandwidth_cap);
                for (const auto& [v, coef] : node_bw[m]) trip.emplace_back(bwr, v, coef);
            }
        }
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k) {
                const int zv = lay.zvar[w][m * K + k];
                if (zv < 0) continue;
                prob.cost[zv] = b(m, k);
                const int c = row(RowKind::Switch, w, m * K + k, w == 0 ? p.x_prev(m, k) : 0.0);
                trip.emplace_back(c, lay.xv(w, m, k), 1.0);
                if (w > 0) trip.emplace_back(c, lay.xv(w - 1, m, k), -1.0);
                trip.emplace_back(c, zv, -1.0);
            }
    }
    if (p.tail)
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k)
                if (b(m, k) > 0.0) prob.entropic.push_back({lay.xv(W - 1, m, k), b(m, k) / p.eta, p.delta});

    prob.h = Eigen::Map<Eigen::VectorXd>(h.data(), static_cast<Eigen::Index>(h.size()));
    prob.G.resize(static_cast<Eigen::Index>(h.size()), lay.nvars);
    prob.G.setFromTriplets(trip.begin(), trip.end());

    const auto res = ipm::solve(prob, {cfg.tol, cfg.max_iter, 0.5});
    if (res.status != ipm::Status::Converged) {
        for (int t = p.first; t <= p.last; ++t)
            if (!slot_feasible(inst, t)) {
                const std::string cls = classify_infeasible(inst, t);
                throw InfeasibleWindow(cls, t, "infeasible window at t=" + std::to_string(t) + " (" + cls + ")");
            }
    }

    EpisodeSolution s;
    s.first = p.first;
    s.last = p.last;
    s.converged = res.status == ipm::Status::Converged;
    s.iterations = res.iterations;
    s.objective = res.objective;
    s.kkt_residual = res.residual;
    s.x.assign(W, Matrix::Zero(M, K));
    s.z.assign(W, Matrix::Zero(M, K));
    s.y.resize(W);
    DualCertificate& c = s.cert;
    c.first = p.first;
    c.theta.resize(W);
    c.alpha.resize(W);
    c.beta.assign(W + 1, Matrix::Zero(M, K));
    c.rho.assign(W, Vector::Zero(M));
    c.mu.assign(W, Vector::Zero(M));
    for (int w = 0; w < W; ++w) {
        const int t = p.first + w;
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k) {
                s.x[w](m, k) = res.v[lay.xv(w, m, k)];
                const int zv = lay.zvar[w][m * K + k];
                if (zv >= 0) s.z[w](m, k) = res.v[zv];
            }
        const int R = inst.num_routes(t);
        s.y[w].assign(R, 0.0);
        for (int r = 0; r < R; ++r) s.y[w][r] = res.v[lay.ybase[w] + r];
        c.theta[w].assign(R, 0.0);
        c.alpha[w].assign(inst.demands(t).size(), 0.0);
    }
    for (int i = 0; i < static_cast<int>(tags.size()); ++i) {
        const RowTag& g = tags[i];
        const double v = res.row_dual[i];
        switch (g.kind) {
            case RowKind::Link: c.theta[g.w][g.index] = v; break;
            case RowKind::Cover: c.alpha[g.w][g.index] = v; break;
            case RowKind::Switch: c.beta[g.w](g.index / K, g.index % K) = v; break;
            case RowKind::Storage: c.rho[g.w][g.index] = v; break;
            case RowKind::Bandwidth: c.mu[g.w][g.index] = v; break;
        }
    }
    if (p.head) c.beta[0] = head;
    if (p.tail)
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k)
                c.beta[W](m, k) = b(m, k) / p.eta * std::log((1.0 + p.delta) / (s.x[W - 1](m, k) + p.delta));
    return s;
}

FractionalHorizon solve_fractional_horizon(const Instance& inst, const SolverConfig& cfg) {
    const int T = inst.horizon();
    const EpisodeProblem p = build_episode(inst, 0, T, zero_placement(inst), 1.0);
    FractionalHorizon out;
    out.solution = solve_episode(p, cfg);
    if (!out.solution.converged)
        throw SolverFailure("fractional horizon LP did not converge (residual " +
                            std::to_string(out.solution.kkt_residual) + ")");
    out.objective = out.solution.objective;
    SolutionTrajectory& tr = out.trajectory;
    tr.x = out.solution.x;
    tr.y = out.solution.y;
    tr.z = out.solution.z;
    tr.unserved.assign(T, {});
    return out;
}

}  // namespace edgeplace
