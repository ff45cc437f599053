#include "edgeplace/oracle.hpp"
#include "fixtures.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace edgeplace;

TEST_CASE("enumerate_states counts") {
    fixtures::Spec a = fixtures::uniform(1, 2, 1, 1);
    a.nodes[0].storage_cap = 1.0;
    CHECK(enumerate_states(a.build()).count == 3);
    CHECK(enumerate_states(fixtures::uniform(2, 2, 1, 1).build()).count == 16);

    fixtures::Spec c = fixtures::uniform(2, 3, 1, 1);
    c.nodes[0].storage_cap = 3.0;
    c.nodes[1].storage_cap = 2.0;
    c.services[0].storage = 1.0;
    c.services[1].storage = 2.0;
    c.services[2].storage = 2.0;
    // independent subset filter
    std::size_t brute = 1;
    for (double R : {3.0, 2.0}) {
        std::size_t per = 0;
        for (int mask = 0; mask < 8; ++mask) {
            double used = 0.0;
            for (int k = 0; k < 3; ++k)
                if (mask >> k & 1) used += c.services[k].storage;
            per += used <= R;
        }
        brute *= per;
    }
    const auto ss = enumerate_states(c.build());
    CHECK(ss.count == brute);
    CHECK(ss.placement(0).sum() == 0.0);
    std::set<std::vector<int>> seen;
    for (std::size_t i = 0; i < ss.count; ++i) CHECK(seen.insert(ss.digits(i)).second);
}

TEST_CASE("state cap") {
    OracleConfig cfg;
    cfg.state_cap = 10;
    CHECK_THROWS_AS(enumerate_states(fixtures::uniform(2, 2, 1, 1).build(), cfg), OracleLimit);
    cfg.state_cap = 100000;
    cfg.transition_budget = 100;
    CHECK_FALSE(integer_opt_tractable(fixtures::uniform(2, 2, 1, 1).build(), cfg));
    CHECK_THROWS_AS(offline_integer_opt(fixtures::uniform(2, 2, 1, 1).build(), cfg), OracleLimit);
}

TEST_CASE("slot_cost examples") {
    fixtures::Spec sp = fixtures::uniform(2, 2, 1, 2, 1.5, 1.0);
    sp.links = {{1, 0, 3.0}};
    sp.trace[1] = {{0, 1, 2.0}};
    const Instance inst = sp.build();
    Matrix x = Matrix::Zero(2, 2);
    x(1, 1) = 1.0;
    x(0, 0) = 1.0;
    CHECK(slot_cost(inst, x, 1) == doctest::Approx(3.0));
    CHECK(slot_cost(inst, x, 2) == doctest::Approx(3.0 + 3.0 * 2.0));
}

TEST_CASE("offline integer optimum: zero demand") {
    const auto r = offline_integer_opt(fixtures::uniform(2, 2, 2, 4, 1.0, 3.0).build());
    CHECK(r.cost == 0.0);
    for (auto s : r.states) CHECK(s == 0);
}

TEST_CASE("offline integer optimum: place once and keep") {
    const int T = 5;
    const double l = 1.0, b = 4.0, d = 2.0, lambda = 3.0;
    const auto r = offline_integer_opt(fixtures::forced(T, lambda, l, b, d));
    CHECK(r.cost == doctest::Approx(b + T * l + T * d * lambda));
}

TEST_CASE("DP equals exhaustive enumeration on micro instances") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        fixtures::DeskShape sh{2, 1, 3, 4, seed % 2 == 0};
        const Instance inst = fixtures::desk(seed, sh);
        const auto dp = offline_integer_opt(inst);
        const auto ex = exhaustive_integer_opt(inst);
        CHECK(dp.states.size() == 4);
        CHECK(dp.cost == ex.cost);
        CHECK(compute_cost(inst, dp.trajectory).cumulative == doctest::Approx(dp.cost).epsilon(1e-9));
    }
}

TEST_CASE("integer optimum invariant under relabeling and monotone in capacity") {
    for (std::uint64_t seed = 90; seed < 94; ++seed) {
        const Instance inst = fixtures::desk(seed, {2, 2, 3, 4, false});
        const double base = offline_integer_opt(inst).cost;

        // swap node 0 and 1
        std::vector<EdgeNode> nodes = inst.nodes();
        std::swap(nodes[0], nodes[1]);
        std::vector<Link> links = inst.links();
        for (auto& ln : links) ln.node = 1 - ln.node;
        Matrix l = inst.storage_cost(), b = inst.placement_cost();
        l.row(0).swap(l.row(1));
        b.row(0).swap(b.row(1));
        const Instance swapped(inst.services(), nodes, inst.num_users(), links, l, b, inst.trace_copy(),
                               inst.overflow_penalty());
        CHECK(offline_integer_opt(swapped).cost == doctest::Approx(base).epsilon(1e-9));

        // swap services 0 and 1
        std::vector<Service> sv = inst.services();
        std::swap(sv[0], sv[1]);
        Matrix l2 = inst.storage_cost(), b2 = inst.placement_cost();
        l2.col(0).swap(l2.col(1));
        b2.col(0).swap(b2.col(1));
        auto tr = inst.trace_copy();
        for (auto& slot : tr)
            for (auto& dm : slot) dm.service = 1 - dm.service;
        const Instance relabeled(sv, inst.nodes(), inst.num_users(), inst.links(), l2, b2, tr, inst.overflow_penalty());
        CHECK(offline_integer_opt(relabeled).cost == doctest::Approx(base).epsilon(1e-9));

        CHECK(offline_integer_opt(inst.with_capacity_scale(1.5, 1.5)).cost <= base + 1e-9);
    }
}

TEST_CASE("fractional optimum: zero demand, forced equality, lower bound") {
    CHECK(offline_fractional_opt(fixtures::uniform(1, 2, 1, 3).build()).objective ==
          doctest::Approx(0.0).scale(1.0).epsilon(1e-5));
    const Instance forced = fixtures::forced(3, 1.0);
    CHECK(offline_fractional_opt(forced, {1e-9, 200}).objective ==
          doctest::Approx(offline_integer_opt(forced).cost).epsilon(1e-7));
    for (std::uint64_t seed = 100; seed < 104; ++seed) {
        const Instance inst = fixtures::desk(seed, {3, 2, 4, 5});
        CHECK(offline_fractional_opt(inst, {1e-9, 300}).objective <= offline_integer_opt(inst).cost + 1e-6);
    }
}
