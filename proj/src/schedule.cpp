#include "edgeplace/schedule.hpp"

#include "edgeplace/simplex.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace edgeplace::baselines {

namespace {

constexpr double kSnap = 1e-12;

void finish(const Instance& inst, int t, ScheduleResult& out) {
    const auto dem = inst.demands(t);
    const double P = inst.overflow_penalty();
    out.unserved.assign(dem.size(), 0.0);
    out.service_cost = out.overflow_cost = out.overflow_mass = 0.0;
    for (int d = 0; d < static_cast<int>(dem.size()); ++d) {
        double served = 0.0;
        for (int r = inst.route_begin(t, d); r < inst.route_begin(t, d + 1); ++r) {
            served += out.y[r];
            out.service_cost += inst.link(inst.route_link(t, r)).weight * dem[d].lambda * out.y[r];
        }
        const double miss = std::max(0.0, 1.0 - served);
        out.unserved[d] = miss;
        out.overflow_mass += dem[d].lambda * miss;
        out.overflow_cost += P * dem[d].lambda * miss;
    }
    out.service_cost += out.overflow_cost;
}

}  // namespace

ScheduleResult schedule_lp(const Instance& inst, const Matrix& x, int t) {
    const int M = inst.num_nodes(), K = inst.num_services();
    if (x.rows() != M || x.cols() != K) throw DimensionMismatch("schedule_lp: x must be M x K");
    const auto dem = inst.demands(t);
    const int D = static_cast<int>(dem.size());
    const int R = inst.num_routes(t);

    ScheduleResult out;
    out.y.assign(R, 0.0);

    // Ignoring bandwidth, each demand fills its cheapest routes first. If that
    // already respects every C_m it is optimal.
    std::vector<double> bw(M, 0.0);
    std::vector<int> order;
    for (int d = 0; d < D; ++d) {
        const int r0 = inst.route_begin(t, d), r1 = inst.route_begin(t, d + 1);
        order.resize(r1 - r0);
        std::iota(order.begin(), order.end(), r0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return inst.link(inst.route_link(t, a)).weight < inst.link(inst.route_link(t, b)).weight;
        });
        double left = 1.0;
        for (int r : order) {
            if (left <= 0.0) break;
            const int m = inst.link(inst.route_link(t, r)).node;
            const double cap = std::clamp(x(m, dem[d].service), 0.0, 1.0);
            if (cap <= kSnap) continue;
            const double v = std::min(cap, left);
            out.y[r] = v;
            left -= v;
            bw[m] += inst.service(dem[d].service).bandwidth * dem[d].lambda * v;
        }
    }
    bool fits = true;
    for (int m = 0; m < M; ++m)
        if (bw[m] > inst.node(m).bandwidth_cap + 1e-9) fits = false;
    if (fits) {
        finish(inst, t, out);
        return out;
    }

    // Packing LP over routes with x > 0.
    std::fill(out.y.begin(), out.y.end(), 0.0);
    out.used_simplex = true;
    std::vector<int> col_route;
    std::vector<int> route_demand(R);
    for (int d = 0; d < D; ++d)
        for (int r = inst.route_begin(t, d); r < inst.route_begin(t, d + 1); ++r) {
            route_demand[r] = d;
            const int m = inst.link(inst.route_link(t, r)).node;
            if (x(m, dem[d].service) > kSnap) col_route.push_back(r);
        }
    const int n = static_cast<int>(col_route.size());
    std::vector<int> upper;
    for (int j = 0; j < n; ++j) {
        const int r = col_route[j];
        const int m = inst.link(inst.route_link(t, r)).node;
        if (x(m, dem[route_demand[r]].service) < 1.0 - kSnap) upper.push_back(j);
    }
    const int rows = D + M + static_cast<int>(upper.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, n);
    Eigen::VectorXd b(rows), c(n);
    const double P = inst.overflow_penalty();
    for (int j = 0; j < n; ++j) {
        const int r = col_route[j];
        const int d = route_demand[r];
        const Link& lk = inst.link(inst.route_link(t, r));
        c[j] = (lk.weight - P) * dem[d].lambda;
        A(d, j) = 1.0;
        A(D + lk.node, j) = inst.service(dem[d].service).bandwidth * dem[d].lambda;
    }
    for (int d = 0; d < D; ++d) b[d] = 1.0;
    for (int m = 0; m < M; ++m) b[D + m] = inst.node(m).bandwidth_cap;
    for (int i = 0; i < static_cast<int>(upper.size()); ++i) {
        const int j = upper[i];
        const int r = col_route[j];
        const int m = inst.link(inst.route_link(t, r)).node;
        A(D + M + i, j) = 1.0;
        b[D + M + i] = std::max(0.0, x(m, dem[route_demand[r]].service));
    }
    const auto res = simplex::solve_packing(c, A, b);
    if (res.status != simplex::Status::Optimal) throw std::runtime_error("schedule_lp: simplex did not reach optimality");
    for (int j = 0; j < n; ++j) out.y[col_route[j]] = std::clamp(res.x[j], 0.0, 1.0);
    finish(inst, t, out);
    return out;
}

}  // namespace edgeplace::baselines
