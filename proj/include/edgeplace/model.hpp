// edgeplace/model.hpp
//
// Domain types for joint service placement and request scheduling on an
// edge network, plus exact cost accounting and constraint checking for any
// (x, y, z) trajectory.
//
// Conventions:
//   - Slots are 1-based (t = 1..T). Slot 0 is the initial placement x_init,
//     all-zero unless the caller provides one.
//   - Requests are stored sparsely: a slot holds a list of Demand entries
//     with lambda > 0, sorted by (user, service).
//   - Scheduling variables y exist only on topology links of a demanded
//     (user, service) pair. For slot t they are laid out as a flat "route"
//     vector: demand d of slot t owns routes [route_begin(t, d),
//     route_begin(t, d + 1)), one per link of its user, in user_links() order.

#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace edgeplace {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Absolute tolerance used by every constraint check.
inline constexpr double kFeasTol = 1e-6;

class InvalidInstance : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class ServiceClass { VS, AR, NG, Custom };

std::string to_string(ServiceClass cls);
ServiceClass service_class_from_string(const std::string& s);

struct Service {
    int id = 0;
    double storage = 1.0;    // r_k
    double bandwidth = 1.0;  // c_k, per request
    ServiceClass cls = ServiceClass::Custom;
};

struct EdgeNode {
    int id = 0;
    double storage_cap = 0.0;    // R_m
    double bandwidth_cap = 0.0;  // C_m
};

struct Link {
    int node = 0;
    int user = 0;
    double weight = 1.0;  // d_{m,n}
};

struct Demand {
    int user = 0;
    int service = 0;
    double lambda = 0.0;
};

/// Full, immutable problem input.
class Instance {
public:
    /// `trace[t - 1]` lists the demand of slot t; entries may be unsorted and
    /// may repeat a (user, service) pair (they are merged). Zero entries are
    /// dropped. A negative `overflow_penalty` selects the default
    /// 10 * max d_{m,n}.
    Instance(std::vector<Service> services,
             std::vector<EdgeNode> nodes,
             int num_users,
             std::vector<Link> links,
             Matrix storage_cost,
             Matrix placement_cost,
             std::vector<std::vector<Demand>> trace,
             double overflow_penalty = -1.0);

    int num_nodes() const { return static_cast<int>(nodes_.size()); }
    int num_users() const { return num_users_; }
    int num_services() const { return static_cast<int>(services_.size()); }
    int horizon() const { return static_cast<int>(trace_.size()); }

    const std::vector<Service>& services() const { return services_; }
    const std::vector<EdgeNode>& nodes() const { return nodes_; }
    const std::vector<Link>& links() const { return links_; }
    const Service& service(int k) const { return services_.at(k); }
    const EdgeNode& node(int m) const { return nodes_.at(m); }
    const Link& link(int j) const { return links_.at(j); }

    /// l_{m,k}: storage cost per slot.
    const Matrix& storage_cost() const { return l_; }
    /// b_{m,k}: cost per placement event.
    const Matrix& placement_cost() const { return b_; }
    double overflow_penalty() const { return overflow_penalty_; }

    /// Link indices touching user n, ascending.
    std::span<const int> user_links(int n) const;

    /// Demands of slot t (1-based), sorted by (user, service), all lambda > 0.
    std::span<const Demand> demands(int t) const;
    /// First route of demand d in slot t; route_begin(t, D) == num_routes(t).
    int route_begin(int t, int d) const;
    int num_routes(int t) const;
    /// Link index of route `r` of slot t.
    int route_link(int t, int r) const;

    /// Total request count sum_{n,k} lambda_{n,k}(t).
    double total_demand(int t) const;
    /// max_{m,k} b/l.
    double max_placement_ratio() const;
    /// max d over links (0 if no links).
    double max_link_weight() const;

    /// Same instance with a different trace (used by look-ahead tests).
    Instance with_trace(std::vector<std::vector<Demand>> trace) const;
    /// Same instance with scaled capacities.
    Instance with_capacity_scale(double storage_factor, double bandwidth_factor) const;

    std::vector<std::vector<Demand>> trace_copy() const { return trace_; }

private:
    void index();

    std::vector<Service> services_;
    std::vector<EdgeNode> nodes_;
    int num_users_ = 0;
    std::vector<Link> links_;
    Matrix l_;
    Matrix b_;
    std::vector<std::vector<Demand>> trace_;
    double overflow_penalty_ = 0.0;

    std::vector<std::vector<int>> user_links_;
    std::vector<std::vector<int>> route_offsets_;  // per slot, D + 1 entries
    std::vector<std::vector<int>> route_links_;    // per slot, one per route
};

/// A fractional or integral (x, y, z) trajectory over the horizon.
struct SolutionTrajectory {
    std::vector<Matrix> x;               // x[t - 1]: M x K
    std::vector<std::vector<double>> y;  // y[t - 1]: one entry per route of slot t
    std::vector<Matrix> z;               // z[t - 1]: M x K
    /// unserved[t - 1][d]: fraction of demand d routed to the overflow channel.
    /// An empty inner vector means no overflow was recorded for that slot.
    std::vector<std::vector<double>> unserved;
    bool integral = false;

    static SolutionTrajectory zeros(const Instance& inst);
    /// Recompute z = [x(t) - x(t-1)]^+ from x.
    void fill_switching(const Matrix& x_init);
};

struct CostBreakdown {
    std::vector<double> storage;   // C_R(t)
    std::vector<double> service;   // C_S(t), overflow charge included
    std::vector<double> dynamic;   // C_D(t)
    std::vector<double> overflow;  // overflow part of C_S(t), informational
    std::vector<double> total;     // C_R + C_S + C_D
    double cumulative = 0.0;

    double storage_sum() const;
    double service_sum() const;
    double dynamic_sum() const;
    double overflow_sum() const;
};

Matrix zero_placement(const Instance& inst);

/// Exact cost of a trajectory. C_D is computed from [x(t) - x(t-1)]^+, not
/// from the stored z, so it is exact for rounded trajectories.
CostBreakdown compute_cost(const Instance& inst,
                           const SolutionTrajectory& sol,
                           const std::optional<Matrix>& x_init = std::nullopt);

/// Cost CSV with header `t,C_R,C_S,C_D,total`.
std::string cost_csv(const CostBreakdown& cost);

struct ConstraintReport {
    double link_capacity = 0.0;   // y <= x
    double coverage = 0.0;        // sum_m y + unserved >= 1 on demanded pairs
    double switching = 0.0;       // z >= x(t) - x(t-1)
    double storage = 0.0;         // sum_k r_k x <= R_m
    double bandwidth = 0.0;       // sum c lambda y <= C_m
    double bounds = 0.0;          // x, y, z in [0, 1]
    double integrality = 0.0;     // only when sol.integral

    double max() const;
};

ConstraintReport check_constraints(const Instance& inst,
                                   const SolutionTrajectory& sol,
                                   const std::optional<Matrix>& x_init = std::nullopt);

struct ValidationReport {
    bool pass = true;
    std::vector<std::string> issues;
    std::vector<int> infeasible_slots;
};

/// Feasibility witnesses: every demanded user has a link, every service fits
/// on some node, aggregate bandwidth covers each slot, and (when `per_slot_lp`)
/// the relaxed per-slot placement/scheduling polytope is nonempty.
ValidationReport validate_instance(const Instance& inst, bool per_slot_lp = true);

/// True iff the relaxed link, coverage, storage and bandwidth constraints admit a solution
/// in slot t. Solved as a max-coverage LP.
bool slot_feasible(const Instance& inst, int t);

}  // namespace edgeplace
