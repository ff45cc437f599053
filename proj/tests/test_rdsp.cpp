#include "edgeplace/rdsp.hpp"
#include "fixtures.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace edgeplace;

namespace {

RoundingState state_of(const Matrix& x) { return RoundingState::from(x); }

bool is_matching(const std::vector<Edge>& es) {
    std::set<int> nodes, services;
    for (const Edge& e : es)
        if (!nodes.insert(e.m).second || !services.insert(e.k).second) return false;
    return true;
}

}  // namespace

TEST_CASE("find_cycle_or_path: 4-cycle") {
    Matrix x = Matrix::Constant(2, 2, 0.5);
    const auto mp = find_cycle_or_path(state_of(x));
    CHECK(mp.cycle);
    CHECK(mp.L1.size() == 2);
    CHECK(mp.L2.size() == 2);
    CHECK(is_matching(mp.L1));
    CHECK(is_matching(mp.L2));
}

TEST_CASE("find_cycle_or_path: path of three edges") {
    Matrix x = Matrix::Zero(2, 2);
    x(0, 0) = 0.3;
    x(0, 1) = 0.4;
    x(1, 1) = 0.6;
    const auto mp = find_cycle_or_path(state_of(x));
    CHECK_FALSE(mp.cycle);
    CHECK(mp.L1.size() == 2);
    CHECK(mp.L2.size() == 1);
    CHECK(is_matching(mp.L1));
}

TEST_CASE("find_cycle_or_path: single edge") {
    Matrix x = Matrix::Zero(3, 3);
    x(1, 2) = 0.7;
    const auto mp = find_cycle_or_path(state_of(x));
    CHECK(mp.L1 == std::vector<Edge>{{1, 2}});
    CHECK(mp.L2.empty());
    CHECK_THROWS_AS(find_cycle_or_path(state_of(Matrix::Zero(2, 2))), std::invalid_argument);
}

TEST_CASE("find_cycle_or_path alternates on random graphs") {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 200; ++rep) {
        const Matrix x = fixtures::random_fractional(rng, 4, 5, 0.5);
        const auto s = state_of(x);
        if (s.edges.empty()) continue;
        const auto mp = find_cycle_or_path(s);
        CHECK(is_matching(mp.L1));
        CHECK(is_matching(mp.L2));
        CHECK(mp.L1.size() >= mp.L2.size());
        if (mp.cycle) CHECK(mp.L1.size() == mp.L2.size());
        for (const Edge& e : mp.L1) CHECK(std::find(mp.L2.begin(), mp.L2.end(), e) == mp.L2.end());
    }
}

TEST_CASE("rounding passes integral input through") {
    std::mt19937_64 rng(1);
    Matrix x(2, 3);
    x << 1, 0, 1, 0, 0, 1;
    const auto r = rdsp_round_slot(x, rng);
    CHECK(r.x == x);
    CHECK(r.iterations == 0);
}

TEST_CASE("single entry rounds as a fair coin") {
    std::mt19937_64 rng(2);
    Matrix x = Matrix::Zero(1, 1);
    x(0, 0) = 0.5;
    double ones = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) ones += rdsp_round_slot(x, rng).x(0, 0);
    CHECK(ones / n >= 0.48);
    CHECK(ones / n <= 0.52);
}

TEST_CASE("4-cycle of halves: one iteration, opposite edges, exact vertex sums") {
    std::mt19937_64 rng(4);
    const Matrix x = Matrix::Constant(2, 2, 0.5);
    Matrix sum = Matrix::Zero(2, 2);
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        int steps = 0;
        const auto r = rdsp_round_slot(x, rng, [&](const RoundingStep& st) {
            ++steps;
            CHECK(st.vertex_drift == 0.0);
            CHECK(st.probability == 0.5);
        });
        CHECK(steps == 1);
        CHECK(r.x(0, 0) == r.x(1, 1));
        CHECK(r.x(0, 1) == r.x(1, 0));
        CHECK(r.x(0, 0) + r.x(0, 1) == 1.0);
        sum += r.x;
    }
    sum /= n;
    for (int i = 0; i < 4; ++i) CHECK(std::abs(sum.data()[i] - 0.5) <= 0.02);
}

TEST_CASE("rounding invariants on random matrices") {
    std::mt19937_64 rng(9);
    for (int rep = 0; rep < 300; ++rep) {
        const Matrix x = fixtures::random_fractional(rng, 5, 10);
        const auto r = rdsp_round_slot(x, rng, [&](const RoundingStep& st) {
            CHECK(st.xi > 0.0);
            CHECK(st.omega > 0.0);
            CHECK(st.probability > 0.0);
            CHECK(st.probability < 1.0);
        });
        CHECK(r.iterations <= 50);
        CHECK(r.max_vertex_drift <= 1e-12);
        for (int i = 0; i < r.x.size(); ++i) CHECK((r.x.data()[i] == 0.0 || r.x.data()[i] == 1.0));
        for (int i = 0; i < x.size(); ++i)
            if (x.data()[i] == 0.0 || x.data()[i] == 1.0) CHECK(r.x.data()[i] == x.data()[i]);
    }
}

TEST_CASE("per-node sums stay within one of the fractional sum") {
    std::mt19937_64 rng(12);
    for (int rep = 0; rep < 300; ++rep) {
        const Matrix x = fixtures::random_fractional(rng, 4, 6);
        const auto r = rdsp_round_slot(x, rng);
        for (int m = 0; m < 4; ++m) {
            CHECK(r.x.row(m).sum() <= std::ceil(x.row(m).sum() - 1e-9) + 1e-12);
            CHECK(r.x.row(m).sum() >= std::floor(x.row(m).sum() + 1e-9) - 1e-12);
        }
    }
}

TEST_CASE("rounding input guards") {
    std::mt19937_64 rng(1);
    Matrix x = Matrix::Constant(1, 2, 0.5);
    x(0, 0) = 1.0 + 5e-7;
    CHECK(rdsp_round_slot(x, rng).x(0, 0) == 1.0);
    x(0, 0) = 1.1;
    CHECK_THROWS_AS(rdsp_round_slot(x, rng), std::invalid_argument);
    x(0, 0) = std::nan("");
    CHECK_THROWS_AS(rdsp_round_slot(x, rng), std::invalid_argument);
    x(0, 0) = 1e-12;
    CHECK(RoundingState::from(x).edges.size() == 1);
}

TEST_CASE("slot streams are reproducible and distinct") {
    auto a = slot_rng(5, 3), b = slot_rng(5, 3), c = slot_rng(5, 4), d = slot_rng(6, 3);
    const auto va = a();
    CHECK(va == b());
    CHECK(va != c());
    CHECK(va != d());
}

TEST_CASE("repair_capacity examples") {
    fixtures::Spec sp = fixtures::uniform(1, 2, 1, 1);
    for (auto& s : sp.services) s.storage = 2.0;
    sp.nodes[0].storage_cap = 3.0;
    const Instance inst = sp.build();
    Matrix xb(1, 2), xf(1, 2);
    xb << 1, 1;
    xf << 0.9, 0.4;
    const auto rep = repair_capacity(xb, inst, xf);
    CHECK(rep.evictions == 1);
    CHECK(rep.x(0, 0) == 1.0);
    CHECK(rep.x(0, 1) == 0.0);
    xb << 1, 0;
    const auto ok = repair_capacity(xb, inst, xf);
    CHECK(ok.evictions == 0);
    CHECK(ok.x == xb);
}

TEST_CASE("unit sizes with an integral budget never evict") {
    std::mt19937_64 rng(17);
    fixtures::Spec sp = fixtures::uniform(5, 10, 1, 1);
    for (auto& nd : sp.nodes) nd.storage_cap = 4.0;
    const Instance inst = sp.build();
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int evictions = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        Matrix x = Matrix::Zero(5, 10);
        for (int m = 0; m < 5; ++m) {
            // random point of {sum <= 4} in [0,1]^10
            for (int k = 0; k < 10; ++k) x(m, k) = u(rng);
            const double s = x.row(m).sum();
            if (s > 4.0) x.row(m) *= 4.0 / s;
        }
        const auto r = rdsp_round_slot(x, rng);
        evictions += repair_capacity(r.x, inst, x).evictions;
    }
    CHECK(evictions == 0);
}

TEST_CASE("repair_schedule examples") {
    fixtures::Spec sp = fixtures::uniform(2, 2, 2, 1);
    sp.links = {{0, 0, 1.0}, {1, 0, 3.0}, {1, 1, 2.0}};
    sp.trace[0] = {{0, 0, 2.0}, {1, 1, 1.0}};
    const Instance inst = sp.build();
    Matrix xb(2, 2);
    xb << 1, 0, 0, 1;
    const auto s = repair_schedule(inst, xb, 1);
    CHECK(s.overflow_mass == 0.0);
    CHECK(s.y == std::vector<double>{1.0, 0.0, 1.0});
    const auto none = repair_schedule(inst, Matrix::Zero(2, 2), 1);
    CHECK(none.overflow_mass == doctest::Approx(3.0));
    CHECK(none.service_cost == doctest::Approx(3.0 * inst.overflow_penalty()));
}

TEST_CASE("competitive ratio r2") {
    fixtures::Spec sp = fixtures::uniform(1, 2, 1, 1, 2.0, 0.0);
    CHECK(competitive_ratio_r2(sp.build()) == 2.0);
    sp.b << 3.0, 1.0;
    CHECK(competitive_ratio_r2(sp.build()) == 4.0);
    sp.b << 4.0, 1.0;
    CHECK(competitive_ratio_r2(sp.build()) == 4.0);
}

TEST_CASE("round_trajectory is seeded and integral") {
    const Instance inst = fixtures::desk(80, {2, 3, 4, 6});
    SolutionTrajectory frac = SolutionTrajectory::zeros(inst);
    std::mt19937_64 rng(1);
    for (auto& x : frac.x) x = fixtures::random_fractional(rng, 2, 3);
    const auto a = round_trajectory(inst, frac, 99), b = round_trajectory(inst, frac, 99);
    CHECK(a.cost.cumulative == b.cost.cumulative);
    const auto rep = check_constraints(inst, a.trajectory);
    CHECK(rep.max() <= kFeasTol);
    CHECK(rep.integrality == 0.0);
}

TEST_CASE("rounding trace csv") {
    std::mt19937_64 rng(3);
    const auto csv = rounding_trace_csv(Matrix::Constant(2, 2, 0.5), rng);
    CHECK(csv.rfind("iteration,m,k,set,shift,probability\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}
