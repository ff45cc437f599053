#include "edgeplace/model.hpp"

#include "edgeplace/ipm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace edgeplace {

std::string to_string(ServiceClass cls) {
    switch (cls) {
        case ServiceClass::VS: return "VS";
        case ServiceClass::AR: return "AR";
        case ServiceClass::NG: return "NG";
        case ServiceClass::Custom: return "custom";
    }
    return "custom";
}

ServiceClass service_class_from_string(const std::string& s) {
    if (s == "VS") return ServiceClass::VS;
    if (s == "AR") return ServiceClass::AR;
    if (s == "NG") return ServiceClass::NG;
    return ServiceClass::Custom;
}

Instance::Instance(std::vector<Service> services,
                   std::vector<EdgeNode> nodes,
                   int num_users,
                   std::vector<Link> links,
                   Matrix storage_cost,
                   Matrix placement_cost,
                   std::vector<std::vector<Demand>> trace,
                   double overflow_penalty)
    : services_(std::move(services)),
      nodes_(std::move(nodes)),
      num_users_(num_users),
      links_(std::move(links)),
      l_(std::move(storage_cost)),
      b_(std::move(placement_cost)),
      trace_(std::move(trace)) {
    const int M = num_nodes(), K = num_services();
    if (M < 1 || K < 1 || num_users_ < 1) throw InvalidInstance("instance needs M, N, K >= 1");
    if (trace_.empty()) throw InvalidInstance("horizon T must be >= 1");
    if (l_.rows() != M || l_.cols() != K) throw InvalidInstance("l must be M x K");
    if (b_.rows() != M || b_.cols() != K) throw InvalidInstance("b must be M x K");
    for (const auto& s : services_)
        if (!(s.storage > 0.0) || !(s.bandwidth > 0.0))
            throw InvalidInstance("service " + std::to_string(s.id) + ": r_k and c_k must be > 0");
    for (const auto& nd : nodes_)
        if (!(nd.storage_cap >= 0.0) || !(nd.bandwidth_cap >= 0.0))
            throw InvalidInstance("node " + std::to_string(nd.id) + ": capacities must be >= 0");
    for (int m = 0; m < M; ++m)
        for (int k = 0; k < K; ++k) {
            if (!(l_(m, k) > 0.0)) throw InvalidInstance("l_{m,k} must be > 0");
            if (!(b_(m, k) >= 0.0) || !std::isfinite(b_(m, k))) throw InvalidInstance("b_{m,k} must be >= 0");
        }
    std::map<std::pair<int, int>, int> seen;
    for (const auto& lk : links_) {
        if (lk.node < 0 || lk.node >= M || lk.user < 0 || lk.user >= num_users_)
            throw InvalidInstance("link index out of range");
        if (!(lk.weight > 0.0) || !std::isfinite(lk.weight)) throw InvalidInstance("link weight d must be > 0");
        if (seen[{lk.node, lk.user}]++) throw InvalidInstance("duplicate link");
    }
    for (auto& slot : trace_) {
        std::map<std::pair<int, int>, double> merged;
        for (const auto& d : slot) {
            if (d.user < 0 || d.user >= num_users_ || d.service < 0 || d.service >= K)
                throw InvalidInstance("demand index out of range");
            if (!(d.lambda >= 0.0) || !std::isfinite(d.lambda)) throw InvalidInstance("demand must be >= 0");
            merged[{d.user, d.service}] += d.lambda;
        }
        slot.clear();
        for (const auto& [key, lam] : merged)
            if (lam > 0.0) slot.push_back({key.first, key.second, lam});
    }
    overflow_penalty_ = overflow_penalty >= 0.0 ? overflow_penalty : 10.0 * max_link_weight();
    index();
}

void Instance::index() {
    user_links_.assign(num_users_, {});
    for (int j = 0; j < static_cast<int>(links_.size()); ++j) user_links_[links_[j].user].push_back(j);
    const int T = horizon();
    route_offsets_.assign(T, {});
    route_links_.assign(T, {});
    for (int t = 0; t < T; ++t) {
        auto& off = route_offsets_[t];
        auto& rl = route_links_[t];
        off.push_back(0);
        for (const auto& d : trace_[t]) {
            for (int j : user_links_[d.user]) rl.push_back(j);
            off.push_back(static_cast<int>(rl.size()));
        }
    }
}

std::span<const int> Instance::user_links(int n) const { return user_links_.at(n); }

std::span<const Demand> Instance::demands(int t) const { return trace_.at(t - 1); }

int Instance::route_begin(int t, int d) const { return route_offsets_.at(t - 1).at(d); }

int Instance::num_routes(int t) const { return route_offsets_.at(t - 1).back(); }

int Instance::route_link(int t, int r) const { return route_links_.at(t - 1).at(r); }

double Instance::total_demand(int t) const {
    double s = 0.0;
    for (const auto& d : demands(t)) s += d.lambda;
    return s;
}

double Instance::max_placement_ratio() const { return (b_.array() / l_.array()).maxCoeff(); }

double Instance::max_link_weight() const {
    double w = 0.0;
    for (const auto& lk : links_) w = std::max(w, lk.weight);
    return w;
}

Instance Instance::with_trace(std::vector<std::vector<Demand>> trace) const {
    return Instance(services_, nodes_, num_users_, links_, l_, b_, std::move(trace), overflow_penalty_);
}

Instance Instance::with_capacity_scale(double storage_factor, double bandwidth_factor) const {
    auto nodes = nodes_;
    for (auto& nd : nodes) {
        nd.storage_cap *= storage_factor;
        nd.bandwidth_cap *= bandwidth_factor;
    }
    return Instance(services_, std::move(nodes), num_users_, links_, l_, b_, trace_, overflow_penalty_);
}

Matrix zero_placement(const Instance& inst) { return Matrix::Zero(inst.num_nodes(), inst.num_services()); }

SolutionTrajectory SolutionTrajectory::zeros(const Instance& inst) {
    SolutionTrajectory s;
    const int T = inst.horizon();
    s.x.assign(T, zero_placement(inst));
    s.z.assign(T, zero_placement(inst));
    s.y.resize(T);
    s.unserved.resize(T);
    for (int t = 1; t <= T; ++t) s.y[t - 1].assign(inst.num_routes(t), 0.0);
    return s;
}

void SolutionTrajectory::fill_switching(const Matrix& x_init) {
    z.resize(x.size());
    for (size_t t = 0; t < x.size(); ++t) {
        const Matrix& prev = t == 0 ? x_init : x[t - 1];
        z[t] = (x[t] - prev).cwiseMax(0.0);
    }
}

double CostBreakdown::storage_sum() const {
    double s = 0.0;
    for (double v : storage) s += v;
    return s;
}
double CostBreakdown::service_sum() const {
    double s = 0.0;
    for (double v : service) s += v;
    return s;
}
double CostBreakdown::dynamic_sum() const {
    double s = 0.0;
    for (double v : dynamic) s += v;
    return s;
}
double CostBreakdown::overflow_sum() const {
    double s = 0.0;
    for (double v : overflow) s += v;
    return s;
}

namespace {

void check_dims(const Instance& inst, const SolutionTrajectory& sol) {
    const int T = inst.horizon(), M = inst.num_nodes(), K = inst.num_services();
    if (static_cast<int>(sol.x.size()) != T || static_cast<int>(sol.y.size()) != T)
        throw DimensionMismatch("trajectory length does not match horizon");
    for (int t = 1; t <= T; ++t) {
        if (sol.x[t - 1].rows() != M || sol.x[t - 1].cols() != K) throw DimensionMismatch("x(t) must be M x K");
        if (static_cast<int>(sol.y[t - 1].size()) != inst.num_routes(t))
            throw DimensionMismatch("y(t) must have one entry per route");
        if (!sol.unserved.empty() && !sol.unserved[t - 1].empty() &&
            static_cast<int>(sol.unserved[t - 1].size()) != static_cast<int>(inst.demands(t).size()))
            throw DimensionMismatch("unserved(t) must have one entry per demand");
    }
    if (!sol.z.empty() && static_cast<int>(sol.z.size()) != T) throw DimensionMismatch("z length mismatch");
}

}  // namespace

CostBreakdown compute_cost(const Instance& inst, const SolutionTrajectory& sol, const std::optional<Matrix>& x_init) {
    check_dims(inst, sol);
    const int T = inst.horizon();
    const Matrix x0 = x_init ? *x_init : zero_placement(inst);
    if (x0.rows() != inst.num_nodes() || x0.cols() != inst.num_services())
        throw DimensionMismatch("x_init must be M x K");

    CostBreakdown c;
    c.storage.resize(T);
    c.service.resize(T);
    c.dynamic.resize(T);
    c.overflow.resize(T);
    c.total.resize(T);
    for (int t = 1; t <= T; ++t) {
        const Matrix& x = sol.x[t - 1];
        const Matrix& prev = t == 1 ? x0 : sol.x[t - 2];
        const double cr = (inst.storage_cost().array() * x.array()).sum();
        const double cd = (inst.placement_cost().array() * (x - prev).cwiseMax(0.0).array()).sum();
        double cs = 0.0, co = 0.0;
        const auto dem = inst.demands(t);
        const auto& y = sol.y[t - 1];
        for (int d = 0; d < static_cast<int>(dem.size()); ++d) {
            for (int r = inst.route_begin(t, d); r < inst.route_begin(t, d + 1); ++r)
                cs += inst.link(inst.route_link(t, r)).weight * dem[d].lambda * y[r];
            if (!sol.unserved.empty() && !sol.unserved[t - 1].empty())
                co += inst.overflow_penalty() * dem[d].lambda * sol.unserved[t - 1][d];
        }
        c.storage[t - 1] = cr;
        c.service[t - 1] = cs + co;
        c.dynamic[t - 1] = cd;
        c.overflow[t - 1] = co;
        c.total[t - 1] = cr + (cs + co) + cd;
        c.cumulative += c.total[t - 1];
    }
    return c;
}

std::string cost_csv(const CostBreakdown& cost) {
    std::ostringstream os;
    os << "t,C_R,C_S,C_D,total\n";
    char buf[256];
    for (size_t i = 0; i < cost.total.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g\n", i + 1, cost.storage[i], cost.service[i],
                      cost.dynamic[i], cost.total[i]);
        os << buf;
    }
    return os.str();
}

double ConstraintReport::max() const {
    return std::max({link_capacity, coverage, switching, storage, bandwidth, bounds, integrality});
}

ConstraintReport check_constraints(const Instance& inst, const SolutionTrajectory& sol,
                                   const std::optional<Matrix>& x_init) {
    check_dims(inst, sol);
    const int T = inst.horizon(), M = inst.num_nodes(), K = inst.num_services();
    const Matrix x0 = x_init ? *x_init : zero_placement(inst);
    ConstraintReport rep;
    auto bump = [](double& slot, double v) { slot = std::max(slot, v); };
    for (int t = 1; t <= T; ++t) {
        const Matrix& x = sol.x[t - 1];
        const Matrix& prev = t == 1 ? x0 : sol.x[t - 2];
        const auto& y = sol.y[t - 1];
        for (int m = 0; m < M; ++m) {
            double used = 0.0;
            for (int k = 0; k < K; ++k) {
                used += inst.service(k).storage * x(m, k);
                bump(rep.bounds, -x(m, k));
                bump(rep.bounds, x(m, k) - 1.0);
                if (!sol.z.empty()) {
                    const double z = sol.z[t - 1](m, k);
                    bump(rep.switching, x(m, k) - prev(m, k) - z);
                    bump(rep.bounds, -z);
                    bump(rep.bounds, z - 1.0);
                }
                if (sol.integral) bump(rep.integrality, std::min(std::abs(x(m, k)), std::abs(x(m, k) - 1.0)));
            }
            bump(rep.storage, used - inst.node(m).storage_cap);
        }
        std::vector<double> bw(M, 0.0);
        const auto dem = inst.demands(t);
        for (int d = 0; d < static_cast<int>(dem.size()); ++d) {
            double served = 0.0;
            for (int r = inst.route_begin(t, d); r < inst.route_begin(t, d + 1); ++r) {
                const int m = inst.link(inst.route_link(t, r)).node;
                served += y[r];
                bump(rep.link_capacity, y[r] - x(m, dem[d].service));
                bump(rep.bounds, -y[r]);
                bump(rep.bounds, y[r] - 1.0);
                bw[m] += inst.service(dem[d].service).bandwidth * dem[d].lambda * y[r];
            }
            if (!sol.unserved.empty() && !sol.unserved[t - 1].empty()) served += sol.unserved[t - 1][d];
            bump(rep.coverage, 1.0 - served);
        }
        for (int m = 0; m < M; ++m) bump(rep.bandwidth, bw[m] - inst.node(m).bandwidth_cap);
    }
    return rep;
}

bool slot_feasible(const Instance& inst, int t) {
    // max sum_d sum_j y_dj  s.t. sum_j y_dj <= 1, y <= x, storage, bandwidth, x <= 1.
    // Feasible iff every demand is fully covered at the optimum.
    const auto dem = inst.demands(t);
    const int D = static_cast<int>(dem.size());
    if (D == 0) return true;
    const int M = inst.num_nodes(), K = inst.num_services();
    for (const auto& d : dem)
        if (inst.user_links(d.user).empty()) return false;

    std::vector<int> xvar(M * K, -1);
    int nv = 0;
    for (int d = 0; d < D; ++d)
        for (int r = inst.route_begin(t, d); r < inst.route_begin(t, d + 1); ++r) {
            const int m = inst.link(inst.route_link(t, r)).node;
            int& xi = xvar[m * K + dem[d].service];
            if (xi < 0) xi = nv++;
        }
    const int ybase = nv;
    const int R = inst.num_routes(t);
    nv += R;

    std::vector<Eigen::Triplet<double>> trip;
    std::vector<double> h;
    auto row = [&](double rhs) {
        h.push_back(rhs);
        return static_cast<int>(h.size()) - 1;
    };
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(nv);
    for (int d = 0; d < D; ++d) {
        const int cover = row(1.0);
        for (int r = inst.route_begin(t, d); r < inst.route_begin(t, d + 1); ++r) {
            const int m = inst.link(inst.route_link(t, r)).node;
            cost[ybase + r] = -1.0;
            trip.emplace_back(cover, ybase + r, 1.0);
            const int cap = row(0.0);
            trip.emplace_back(cap, ybase + r, 1.0);
            trip.emplace_back(cap, xvar[m * K + dem[d].service], -1.0);
        }
    }
    for (int m = 0; m < M; ++m) {
        const int st = row(inst.node(m).storage_cap);
        const int bw = row(inst.node(m).bandwidth_cap);
        for (int k = 0; k < K; ++k)
            if (xvar[m * K + k] >= 0) trip.emplace_back(st, xvar[m * K + k], inst.service(k).storage);
        for (int d = 0; d < D; ++d)
            for (int r = inst.route_begin(t, d); r < inst.route_begin(t, d + 1); ++r)
                if (inst.link(inst.route_link(t, r)).node == m)
                    trip.emplace_back(bw, ybase + r, inst.service(dem[d].service).bandwidth * dem[d].lambda);
    }
    for (int i = 0; i < ybase; ++i) trip.emplace_back(row(1.0), i, 1.0);

    ipm::Problem p;
    p.cost = cost;
    p.h = Eigen::Map<Eigen::VectorXd>(h.data(), static_cast<Eigen::Index>(h.size()));
    p.G.resize(static_cast<Eigen::Index>(h.size()), nv);
    p.G.setFromTriplets(trip.begin(), trip.end());
    const auto res = ipm::solve(p, {1e-9, 200, 0.5});
    return -res.objective >= D - 1e-6;
}

ValidationReport validate_instance(const Instance& inst, bool per_slot_lp) {
    ValidationReport rep;
    const int T = inst.horizon(), M = inst.num_nodes(), K = inst.num_services();
    auto fail = [&](std::string msg) {
        rep.pass = false;
        rep.issues.push_back(std::move(msg));
    };

    double max_R = 0.0, sum_C = 0.0;
    for (int m = 0; m < M; ++m) {
        max_R = std::max(max_R, inst.node(m).storage_cap);
        sum_C += inst.node(m).bandwidth_cap;
    }
    for (int k = 0; k < K; ++k)
        if (inst.service(k).storage > max_R)
            fail("unstorable service k=" + std::to_string(k) + " (r_k exceeds every R_m)");

    std::vector<bool> reported(inst.num_users(), false);
    for (int t = 1; t <= T; ++t) {
        bool slot_ok = true;
        double bw = 0.0;
        for (const auto& d : inst.demands(t)) {
            bw += inst.service(d.service).bandwidth * d.lambda;
            if (inst.user_links(d.user).empty()) {
                slot_ok = false;
                if (!reported[d.user]) {
                    fail("uncovered user n=" + std::to_string(d.user) + " has demand but no links");
                    reported[d.user] = true;
                }
            }
        }
        if (bw > sum_C + kFeasTol) {
            slot_ok = false;
            fail("bandwidth shortfall at t=" + std::to_string(t));
        }
        if (slot_ok && per_slot_lp && !slot_feasible(inst, t)) {
            slot_ok = false;
            fail("slot t=" + std::to_string(t) + " has no feasible relaxed placement");
        }
        if (!slot_ok) rep.infeasible_slots.push_back(t);
    }
    return rep;
}

}  // namespace edgeplace
