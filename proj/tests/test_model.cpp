#include "edgeplace/instance_io.hpp"
#include "edgeplace/tracegen.hpp"
#include "fixtures.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>

using namespace edgeplace;

namespace {

SolutionTrajectory random_trajectory(const Instance& inst, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SolutionTrajectory s = SolutionTrajectory::zeros(inst);
    for (int t = 1; t <= inst.horizon(); ++t) {
        for (int m = 0; m < inst.num_nodes(); ++m)
            for (int k = 0; k < inst.num_services(); ++k) s.x[t - 1](m, k) = u(rng);
        for (auto& v : s.y[t - 1]) v = u(rng);
    }
    s.fill_switching(zero_placement(inst));
    return s;
}

// independent summation over every (m, n, k, t)
double naive_cost(const Instance& inst, const SolutionTrajectory& s) {
    double c = 0.0;
    const int M = inst.num_nodes(), K = inst.num_services();
    for (int t = 1; t <= inst.horizon(); ++t) {
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k) {
                c += inst.storage_cost()(m, k) * s.x[t - 1](m, k);
                const double prev = t == 1 ? 0.0 : s.x[t - 2](m, k);
                c += inst.placement_cost()(m, k) * std::max(0.0, s.x[t - 1](m, k) - prev);
            }
        for (int m = 0; m < M; ++m)
            for (int n = 0; n < inst.num_users(); ++n)
                for (int k = 0; k < K; ++k) {
                    const auto dem = inst.demands(t);
                    for (int d = 0; d < static_cast<int>(dem.size()); ++d) {
                        if (dem[d].user != n || dem[d].service != k) continue;
                        for (int r = inst.route_begin(t, d); r < inst.route_begin(t, d + 1); ++r) {
                            const Link& ln = inst.link(inst.route_link(t, r));
                            if (ln.node == m) c += ln.weight * dem[d].lambda * s.y[t - 1][r];
                        }
                    }
                }
    }
    return c;
}

}  // namespace

TEST_CASE("compute_cost: zero trajectory costs nothing") {
    const Instance inst = fixtures::uniform(2, 2, 2, 3).build();
    const auto c = compute_cost(inst, SolutionTrajectory::zeros(inst));
    CHECK(c.cumulative == 0.0);
    for (double v : c.total) CHECK(v == 0.0);
}

TEST_CASE("compute_cost: one always-placed service without demand") {
    const Instance inst = fixtures::uniform(1, 1, 1, 3, 1.0, 4.0).build();
    SolutionTrajectory s = SolutionTrajectory::zeros(inst);
    for (auto& x : s.x) x.setOnes();
    const auto c = compute_cost(inst, s);
    CHECK(c.storage == std::vector<double>{1, 1, 1});
    CHECK(c.dynamic == std::vector<double>{4, 0, 0});
    CHECK(c.cumulative == doctest::Approx(7.0));
}

TEST_CASE("compute_cost matches a naive summation") {
    std::mt19937_64 rng(7);
    fixtures::Spec sp = fixtures::uniform(2, 2, 2, 2);
    std::uniform_real_distribution<double> u(0.5, 3.0);
    for (auto& ln : sp.links) ln.weight = u(rng);
    sp.l = sp.l.unaryExpr([&](double) { return u(rng); });
    sp.b = sp.b.unaryExpr([&](double) { return u(rng); });
    sp.trace[0] = {{0, 0, 2.0}, {1, 1, 1.0}, {1, 0, 3.0}};
    sp.trace[1] = {{0, 1, 1.5}};
    const Instance inst = sp.build();
    for (int rep = 0; rep < 5; ++rep) {
        const auto s = random_trajectory(inst, rng);
        CHECK(compute_cost(inst, s).cumulative == doctest::Approx(naive_cost(inst, s)).epsilon(1e-12));
    }
}

TEST_CASE("compute_cost ignores the stored z and charges overflow in C_S") {
    const Instance inst = fixtures::forced(2, 3.0, 1.0, 4.0, 2.0);
    SolutionTrajectory s = SolutionTrajectory::zeros(inst);
    s.x[0].setOnes();
    s.y[0] = {1.0};
    s.z[0].setConstant(0.25);
    s.unserved = {{0.0}, {1.0}};
    const auto c = compute_cost(inst, s);
    CHECK(c.dynamic[0] == doctest::Approx(4.0));
    CHECK(c.service[0] == doctest::Approx(6.0));
    CHECK(c.overflow[1] == doctest::Approx(3.0 * inst.overflow_penalty()));
    CHECK(c.service[1] == doctest::Approx(3.0 * 20.0));
    for (size_t t = 0; t < c.total.size(); ++t)
        CHECK(c.total[t] == doctest::Approx(c.storage[t] + c.service[t] + c.dynamic[t]));
}

TEST_CASE("compute_cost is convex along feasible segments") {
    std::mt19937_64 rng(11);
    const Instance inst = fixtures::desk(3, {2, 2, 3, 4});
    for (int rep = 0; rep < 20; ++rep) {
        auto a = random_trajectory(inst, rng), b = random_trajectory(inst, rng);
        const double alpha = std::uniform_real_distribution<double>(0, 1)(rng);
        SolutionTrajectory mid = SolutionTrajectory::zeros(inst);
        for (int t = 0; t < inst.horizon(); ++t) {
            mid.x[t] = alpha * a.x[t] + (1 - alpha) * b.x[t];
            for (size_t r = 0; r < mid.y[t].size(); ++r) mid.y[t][r] = alpha * a.y[t][r] + (1 - alpha) * b.y[t][r];
        }
        mid.fill_switching(zero_placement(inst));
        const double lhs = compute_cost(inst, mid).cumulative;
        const double rhs = alpha * compute_cost(inst, a).cumulative + (1 - alpha) * compute_cost(inst, b).cumulative;
        CHECK(lhs <= rhs + 1e-9);
    }
}

TEST_CASE("compute_cost rejects mismatched dimensions") {
    const Instance inst = fixtures::uniform(2, 2, 1, 3).build();
    SolutionTrajectory s = SolutionTrajectory::zeros(inst);
    s.x.pop_back();
    CHECK_THROWS_AS(compute_cost(inst, s), DimensionMismatch);
    s = SolutionTrajectory::zeros(inst);
    CHECK_THROWS_AS(compute_cost(inst, s, Matrix::Zero(3, 2)), DimensionMismatch);
}

TEST_CASE("cost csv has one row per slot") {
    const Instance inst = fixtures::forced(3);
    SolutionTrajectory s = SolutionTrajectory::zeros(inst);
    const auto csv = cost_csv(compute_cost(inst, s));
    CHECK(csv.rfind("t,C_R,C_S,C_D,total\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("instance merges repeated demand and drops zeros") {
    fixtures::Spec sp = fixtures::uniform(1, 2, 2, 1);
    sp.trace[0] = {{1, 1, 1.0}, {0, 0, 0.0}, {1, 1, 2.5}, {0, 1, 1.0}};
    const Instance inst = sp.build();
    const auto d = inst.demands(1);
    REQUIRE(d.size() == 2);
    CHECK(d[0].user == 0);
    CHECK(d[1].lambda == 3.5);
    CHECK(inst.num_routes(1) == 2);
    CHECK(inst.overflow_penalty() == 10.0);
}

TEST_CASE("instance rejects bad parameters") {
    fixtures::Spec sp = fixtures::uniform(1, 1, 1, 1);
    sp.l(0, 0) = 0.0;
    CHECK_THROWS_AS(sp.build(), InvalidInstance);
    sp = fixtures::uniform(1, 1, 1, 1);
    sp.links[0].weight = 0.0;
    CHECK_THROWS_AS(sp.build(), InvalidInstance);
    sp = fixtures::uniform(1, 1, 1, 1);
    sp.services[0].storage = 0.0;
    CHECK_THROWS_AS(sp.build(), InvalidInstance);
}

TEST_CASE("check_constraints flags each violated class") {
    const Instance inst = fixtures::forced(1, 1.0);
    SolutionTrajectory s = SolutionTrajectory::zeros(inst);
    s.x[0].setConstant(0.5);
    s.y[0] = {1.0};
    s.fill_switching(zero_placement(inst));
    auto rep = check_constraints(inst, s);
    CHECK(rep.link_capacity == doctest::Approx(0.5));
    s.y[0] = {0.5};
    rep = check_constraints(inst, s);
    CHECK(rep.coverage == doctest::Approx(0.5));
    CHECK(rep.link_capacity == 0.0);
    s.unserved = {{0.5}};
    CHECK(check_constraints(inst, s).max() == 0.0);
}

TEST_CASE("validate: uncovered user") {
    fixtures::Spec sp = fixtures::uniform(1, 1, 2, 1);
    sp.links = {{0, 0, 1.0}};
    sp.trace[0] = {{1, 0, 1.0}};
    const auto rep = validate_instance(sp.build());
    CHECK_FALSE(rep.pass);
    CHECK(rep.issues.at(0).find("uncovered user") != std::string::npos);
}

TEST_CASE("validate: unstorable service") {
    fixtures::Spec sp = fixtures::uniform(2, 1, 1, 1);
    sp.services[0].storage = 50.0;
    for (auto& nd : sp.nodes) nd.storage_cap = 40.0;
    const auto rep = validate_instance(sp.build());
    CHECK_FALSE(rep.pass);
    CHECK(rep.issues.at(0).find("unstorable service") != std::string::npos);
}

TEST_CASE("validate: per-slot relaxation catches a node-local shortfall") {
    fixtures::Spec sp = fixtures::uniform(2, 1, 2, 2);
    sp.links = {{0, 0, 1.0}, {1, 1, 1.0}};
    for (auto& nd : sp.nodes) nd.bandwidth_cap = 5.0;
    sp.trace[0] = {{0, 0, 4.0}, {1, 0, 4.0}};
    sp.trace[1] = {{0, 0, 8.0}};
    const auto rep = validate_instance(sp.build());
    CHECK_FALSE(rep.pass);
    CHECK(rep.infeasible_slots == std::vector<int>{2});
    CHECK(slot_feasible(sp.build(), 1));
}

TEST_CASE("validate: generated instances pass") {
    for (std::uint64_t seed : {1, 2, 3}) CHECK(validate_instance(generate(scale(GeneratorConfig{}, 0.1), seed)).pass);
}

TEST_CASE("instance file round trip") {
    const Instance inst = generate(scale(GeneratorConfig{}, 0.05), 4);
    const auto path = std::filesystem::temp_directory_path() / "edgeplace_roundtrip.json";
    save_instance(inst, path.string());
    const Instance back = load_instance(path.string());
    CHECK(instance_to_json(back).dump() == instance_to_json(inst).dump());
    std::filesystem::remove(path);
    CHECK_THROWS(load_instance((std::filesystem::temp_directory_path() / "no_such_instance.json").string()));
}

TEST_CASE("instance file infers N and rejects malformed content") {
    nlohmann::json j = instance_to_json(fixtures::forced(2));
    j.erase("N");
    CHECK(instance_from_json(j).num_users() == 1);
    j["links"] = nlohmann::json::array({nlohmann::json::array({0, 0, -1.0})});
    CHECK_THROWS_AS(instance_from_json(j), InvalidInstance);
}
