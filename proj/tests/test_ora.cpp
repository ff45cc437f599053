#include "edgeplace/ora.hpp"
#include "edgeplace/oracle.hpp"
#include "fixtures.hpp"

#include <doctest.h>

#include <cmath>

using namespace edgeplace;

namespace {

std::vector<std::pair<int, int>> spans(const std::vector<EpisodeWindow>& ws) {
    std::vector<std::pair<int, int>> out;
    for (const auto& w : ws) out.emplace_back(w.first, w.last);
    return out;
}

}  // namespace

TEST_CASE("enumerate_episodes examples") {
    // starts pi + (L+1) v
    const auto v1 = enumerate_episodes(6, 1, 1);
    CHECK(spans(v1) == std::vector<std::pair<int, int>>{{1, 2}, {3, 4}, {5, 6}});
    const auto v0 = enumerate_episodes(6, 1, 0);
    CHECK(spans(v0) == std::vector<std::pair<int, int>>{{1, 1}, {2, 3}, {4, 5}, {6, 6}});
    CHECK(v0.front().t_start == 0);
    CHECK_FALSE(build_episode(fixtures::forced(6), v0.front().t_start, 1, Matrix::Zero(1, 1), 0.3).head);
    const auto l0 = enumerate_episodes(5, 0, 0);
    CHECK(spans(l0) == std::vector<std::pair<int, int>>{{1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}});
}

TEST_CASE("every slot is covered once per version") {
    for (int T : {1, 2, 7, 30})
        for (int L : {0, 1, 2, 5, 8}) {
            std::vector<int> cover(T + 1, 0);
            for (int pi = 0; pi <= L; ++pi) {
                int next = 1;
                for (const auto& w : enumerate_episodes(T, L, pi)) {
                    CHECK(w.first == next);
                    CHECK(w.last >= w.first);
                    CHECK(w.last - w.first <= L);
                    CHECK((w.t_start - pi) % (L + 1) == 0);
                    for (int t = w.first; t <= w.last; ++t) ++cover[t];
                    next = w.last + 1;
                }
                CHECK(next == T + 1);
            }
            for (int t = 1; t <= T; ++t) CHECK(cover[t] == L + 1);
        }
}

TEST_CASE("competitive ratio r1") {
    CHECK(competitive_ratio_r1(500, 2, 5, 0.3) == doctest::Approx(8.423632).epsilon(1e-7));
    CHECK(competitive_ratio_r1(500, 0, 5, 0.3) == 1.0);
    double prev = competitive_ratio_r1(20, 3, 0, 0.3);
    for (int L = 1; L < 200; ++L) {
        const double r = competitive_ratio_r1(20, 3, L, 0.3);
        CHECK(r < prev);
        CHECK(r > 1.0);
        prev = r;
    }
    CHECK(prev < 1.5);
    fixtures::Spec sp = fixtures::uniform(1, 1, 1, 2, 2.0, 0.0);
    CHECK(competitive_ratio_r1(sp.build(), 3, 0.3) == 1.0);
}

TEST_CASE("ora on zero demand costs nothing") {
    const Instance inst = fixtures::uniform(2, 2, 2, 5).build();
    const OraRun run = run_ora(inst, {2, 0.3});
    CHECK(run.all_converged);
    CHECK(run.cost.cumulative == doctest::Approx(0.0).scale(1.0).epsilon(1e-4));
    for (const auto& x : run.averaged.x) CHECK(x.maxCoeff() <= 1e-5);
}

TEST_CASE("ora with a single forced route keeps x = 1") {
    const Instance inst = fixtures::forced(4, 2.0);
    const OraRun run = run_ora(inst, {1, 0.3});
    REQUIRE(run.versions.size() == 2);
    for (const auto& v : run.versions)
        for (const auto& x : v.x) CHECK(x(0, 0) == doctest::Approx(1.0).epsilon(1e-5));
    for (const auto& x : run.averaged.x) CHECK(x(0, 0) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("ora sits between the fractional and r1 times the integer optimum") {
    for (std::uint64_t seed = 40; seed < 44; ++seed) {
        const Instance inst = fixtures::desk(seed, {2, 2, 3, 6});
        const OraRun run = run_ora(inst, {2, 0.3});
        const double P = offline_fractional_opt(inst, {1e-9, 300}).objective;
        const double opt = offline_integer_opt(inst).cost;
        CHECK(run.cost.cumulative >= P - 1e-5 * std::max(1.0, P));
        CHECK(run.cost.cumulative <= competitive_ratio_r1(inst, 2, 0.3) * opt);
    }
}

TEST_CASE("averaged trajectory is feasible") {
    for (std::uint64_t seed = 50; seed < 54; ++seed) {
        const Instance inst = fixtures::desk(seed, {3, 3, 5, 8, seed % 2 == 1});
        const OraRun run = run_ora(inst, {2, 0.3});
        CHECK(check_constraints(inst, run.averaged).max() <= kFeasTol);
        for (const auto& x : run.averaged.x) {
            CHECK(x.minCoeff() >= -kFeasTol);
            CHECK(x.maxCoeff() <= 1 + kFeasTol);
        }
    }
}

TEST_CASE("look-ahead isolation") {
    const int L = 2;
    const Instance base = fixtures::desk(61, {2, 3, 4, 10});
    for (int t = 1; t + L + 1 <= base.horizon(); t += 3) {
        auto trace = base.trace_copy();
        trace[t + L].push_back({0, 0, 7.0});  // slot t + L + 1
        trace[t + L].push_back({1, 2, 3.0});
        const Instance pert = base.with_trace(trace);
        const OraRun a = run_ora(base, {L, 0.3});
        const OraRun b = run_ora(pert, {L, 0.3});
        for (int pi = 0; pi <= L; ++pi)
            for (size_t e = 0; e < a.episodes[pi].size(); ++e) {
                const auto& ea = a.episodes[pi][e];
                if (ea.problem.last > t + L) break;
                const auto& eb = b.episodes[pi][e];
                for (int w = 0; w < ea.problem.window(); ++w) CHECK((ea.solution.x[w] - eb.solution.x[w]).norm() == 0.0);
            }
    }
}

TEST_CASE("ora is deterministic and independent of the job count") {
    const Instance inst = fixtures::desk(70, {2, 3, 4, 8});
    const OraRun a = run_ora(inst, {3, 0.3, {}, 1});
    const OraRun b = run_ora(inst, {3, 0.3, {}, 3});
    CHECK(a.cost.cumulative == b.cost.cumulative);
    for (size_t t = 0; t < a.averaged.x.size(); ++t) CHECK((a.averaged.x[t] - b.averaged.x[t]).norm() == 0.0);
    const auto csv = version_csv(a, 1);
    CHECK(csv.rfind("t,m,k,x\n", 0) == 0);
}
