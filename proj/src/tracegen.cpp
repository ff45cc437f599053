#include "edgeplace/tracegen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

namespace edgeplace {

namespace {

double draw(std::mt19937_64& rng, const Range& r) { return std::uniform_real_distribution<double>(r.lo, r.hi)(rng); }

}  // namespace

Instance generate(const GeneratorConfig& cfg, std::uint64_t seed) {
    if (cfg.M < 1 || cfg.N < 1 || cfg.K < 1 || cfg.T < 1) throw std::invalid_argument("generate: sizes must be >= 1");
    if (cfg.links < cfg.N) throw std::invalid_argument("generate: need links >= N so every user is connected");
    if (static_cast<long long>(cfg.links) > static_cast<long long>(cfg.M) * cfg.N)
        throw std::invalid_argument("generate: more links than node-user pairs");
    std::mt19937_64 rng(seed);
    const int M = cfg.M, N = cfg.N, K = cfg.K;

    std::vector<EdgeNode> nodes;
    for (int m = 0; m < M; ++m) nodes.push_back({m, cfg.R, cfg.C});

    // three contiguous class blocks, remainder to the earlier ones
    std::vector<Service> services;
    const int base = K / 3, extra = K % 3;
    const int vs_end = base + (extra > 0), ar_end = vs_end + base + (extra > 1);
    for (int k = 0; k < K; ++k) {
        Service s;
        s.id = k;
        if (k < vs_end) {
            s.cls = ServiceClass::VS;
            s.storage = draw(rng, cfg.vs_r);
            s.bandwidth = draw(rng, cfg.vs_c);
        } else if (k < ar_end) {
            s.cls = ServiceClass::AR;
            s.storage = draw(rng, cfg.ar_r);
            s.bandwidth = draw(rng, cfg.ar_c);
        } else {
            s.cls = ServiceClass::NG;
            s.storage = draw(rng, cfg.ng_r);
            s.bandwidth = draw(rng, cfg.ng_c);
        }
        services.push_back(s);
    }

    std::vector<std::vector<bool>> linked(M, std::vector<bool>(N, false));
    std::uniform_int_distribution<int> pick_node(0, M - 1);
    for (int n = 0; n < N; ++n) linked[pick_node(rng)][n] = true;
    std::vector<std::pair<int, int>> spare;
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < M; ++m)
            if (!linked[m][n]) spare.emplace_back(m, n);
    std::shuffle(spare.begin(), spare.end(), rng);
    for (int i = 0; i < cfg.links - N; ++i) linked[spare[i].first][spare[i].second] = true;
    std::vector<Link> links;
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < M; ++m)
            if (linked[m][n]) links.push_back({m, n, draw(rng, cfg.d)});

    Matrix l(M, K), b(M, K);
    for (int m = 0; m < M; ++m) {
        const double kappa = draw(rng, cfg.kappa);
        for (int k = 0; k < K; ++k) l(m, k) = kappa / services[k].storage;
    }
    for (int m = 0; m < M; ++m)
        for (int k = 0; k < K; ++k) b(m, k) = draw(rng, cfg.b);

    std::vector<std::vector<double>> pop(N, std::vector<double>(K));
    std::vector<double> rate(N);
    std::vector<int> perm(K);
    double expected_bw = 0.0;
    for (int n = 0; n < N; ++n) {
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        double z = 0.0;
        for (int rank = 0; rank < K; ++rank) {
            const double w = 1.0 / std::pow(rank + 1.0, cfg.zipf_s);
            pop[n][perm[rank]] = w;
            z += w;
        }
        rate[n] = draw(rng, cfg.user_rate);
        for (int k = 0; k < K; ++k) {
            pop[n][k] /= z;
            expected_bw += rate[n] * pop[n][k] * services[k].bandwidth;
        }
    }
    const double budget = cfg.load_factor * cfg.C * M;
    const double throttle = cfg.load_factor > 0.0 && expected_bw > budget ? budget / expected_bw : 1.0;

    // candidate nodes per user, cheapest link first
    std::vector<std::vector<int>> near(N);
    {
        std::vector<std::vector<std::pair<double, int>>> tmp(N);
        for (const Link& ln : links) tmp[ln.user].emplace_back(ln.weight, ln.node);
        for (int n = 0; n < N; ++n) {
            std::sort(tmp[n].begin(), tmp[n].end());
            for (const auto& [dd, m] : tmp[n]) near[n].push_back(m);
        }
    }

    std::vector<std::discrete_distribution<int>> choose;
    for (int n = 0; n < N; ++n) choose.emplace_back(pop[n].begin(), pop[n].end());
    std::vector<std::vector<Demand>> trace(cfg.T);
    std::vector<std::pair<int, int>> requests;
    for (int t = 0; t < cfg.T; ++t) {
        requests.clear();
        for (int n = 0; n < N; ++n) {
            const int cnt = std::poisson_distribution<int>(rate[n] * throttle)(rng);
            for (int i = 0; i < cnt; ++i) requests.emplace_back(n, choose[n](rng));
        }
        std::shuffle(requests.begin(), requests.end(), rng);
        // admit a request only if an integral placement still serves everything admitted so far
        std::vector<double> bw(M, 0.0), st(M, 0.0);
        std::vector<std::vector<bool>> held(M, std::vector<bool>(K, false));
        std::map<std::pair<int, int>, double> counts;
        for (const auto& [n, k] : requests) {
            const Service& s = services[k];
            for (int m : near[n]) {
                if (bw[m] + s.bandwidth > cfg.C) continue;
                if (!held[m][k] && st[m] + s.storage > cfg.R) continue;
                bw[m] += s.bandwidth;
                if (!held[m][k]) st[m] += s.storage, held[m][k] = true;
                counts[{n, k}] += 1.0;
                break;
            }
        }
        for (const auto& [key, c] : counts) trace[t].push_back({key.first, key.second, c});
    }
    return Instance(std::move(services), std::move(nodes), N, std::move(links), std::move(l), std::move(b),
                    std::move(trace), cfg.overflow_penalty);
}

GeneratorConfig scale(const GeneratorConfig& cfg, double factor) {
    if (!(factor > 0.0) || factor > 1.0) throw std::invalid_argument("scale: factor must be in (0, 1]");
    auto up = [&](int v) { return std::max(1, static_cast<int>(std::ceil(v * factor - 1e-9))); };
    GeneratorConfig out = cfg;
    out.N = up(cfg.N);
    out.K = up(cfg.K);
    out.links = up(cfg.links);
    out.T = up(cfg.T);
    return out;
}

}  // namespace edgeplace
