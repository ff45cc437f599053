// Small hand-built and seeded random instances shared by the unit and
// acceptance tests.

#pragma once

#include "edgeplace/model.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <random>
#include <vector>

namespace fixtures {

using namespace edgeplace;

struct Spec {
    std::vector<Service> services;
    std::vector<EdgeNode> nodes;
    int N = 0;
    std::vector<Link> links;
    Matrix l, b;
    std::vector<std::vector<Demand>> trace;
    double penalty = -1.0;

    Instance build() const { return Instance(services, nodes, N, links, l, b, trace, penalty); }
};

// M nodes, K services, every user linked to every node with weight 1, unit
// sizes and ample capacity.
inline Spec uniform(int M, int K, int N, int T, double l = 1.0, double b = 1.0) {
    Spec s;
    for (int k = 0; k < K; ++k) s.services.push_back({k, 1.0, 1.0, ServiceClass::Custom});
    for (int m = 0; m < M; ++m) s.nodes.push_back({m, 1e3, 1e3});
    s.N = N;
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < M; ++m) s.links.push_back({m, n, 1.0});
    s.l = Matrix::Constant(M, K, l);
    s.b = Matrix::Constant(M, K, b);
    s.trace.assign(T, {});
    return s;
}

// One node, one service, one user, `lambda` requests every slot.
inline Instance forced(int T, double lambda = 1.0, double l = 1.0, double b = 4.0, double d = 2.0) {
    Spec s = uniform(1, 1, 1, T, l, b);
    s.links[0].weight = d;
    for (auto& slot : s.trace) slot.push_back({0, 0, lambda});
    return s.build();
}

struct DeskShape {
    int M = 2;
    int K = 2;
    int N = 3;
    int T = 6;
    bool ample_bandwidth = true;
    bool tight_storage = true;
    double demand_prob = 0.5;
};

// Random desk-scale instance: 1-2 links per user, r in [1,3], storage that may
// or may not hold every service, integer demand 1..3. Draws that fail
// validate_instance are redrawn.
inline Instance desk_draw(std::mt19937_64& rng, const DeskShape& sh) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto uni = [&](double a, double b) { return a + (b - a) * u(rng); };
    Spec s;
    double total_r = 0.0, max_r = 0.0;
    for (int k = 0; k < sh.K; ++k) {
        s.services.push_back({k, uni(1.0, 3.0), uni(0.5, 2.0), ServiceClass::Custom});
        total_r += s.services.back().storage;
        max_r = std::max(max_r, s.services.back().storage);
    }
    for (int m = 0; m < sh.M; ++m) {
        const double R = sh.tight_storage ? std::max(max_r, uni(0.5, 1.0) * total_r) : total_r + 1.0;
        const double C = sh.ample_bandwidth ? 1e4 : uni(1.5, 3.0) * sh.N;
        s.nodes.push_back({m, R, C});
    }
    s.N = sh.N;
    for (int n = 0; n < sh.N; ++n) {
        const int home = static_cast<int>(rng() % sh.M);
        s.links.push_back({home, n, uni(1.0, 5.0)});
        if (sh.M > 1 && u(rng) < 0.5) {
            const int other = (home + 1 + static_cast<int>(rng() % (sh.M - 1))) % sh.M;
            s.links.push_back({other, n, uni(1.0, 5.0)});
        }
    }
    s.l.resize(sh.M, sh.K);
    s.b.resize(sh.M, sh.K);
    for (int m = 0; m < sh.M; ++m)
        for (int k = 0; k < sh.K; ++k) {
            s.l(m, k) = uni(0.5, 2.0);
            s.b(m, k) = uni(1.0, 5.0);
        }
    s.trace.assign(sh.T, {});
    for (int t = 0; t < sh.T; ++t)
        for (int n = 0; n < sh.N; ++n)
            for (int k = 0; k < sh.K; ++k)
                if (u(rng) < sh.demand_prob / sh.K * 2.0) s.trace[t].push_back({n, k, 1.0 + static_cast<double>(rng() % 3)});
    return s.build();
}

inline Instance desk(std::uint64_t seed, const DeskShape& sh) {
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Instance inst = desk_draw(rng, sh);
        if (validate_instance(inst).pass) return inst;
    }
    throw std::runtime_error("desk: no valid draw");
}

// A fractional matrix with entries spread over (0, 1), some exactly integral.
inline Matrix random_fractional(std::mt19937_64& rng, int M, int K, double integral_share = 0.2) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Matrix x(M, K);
    for (int m = 0; m < M; ++m)
        for (int k = 0; k < K; ++k) {
            const double p = u(rng);
            if (p < integral_share / 2) x(m, k) = 0.0;
            else if (p < integral_share) x(m, k) = 1.0;
            else x(m, k) = u(rng);
        }
    return x;
}

}  // namespace fixtures
