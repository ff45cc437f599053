// edgeplace/tracegen.hpp
//
// Synthetic instances: M nodes, N users, a link budget (each user gets one
// link first, the rest are spread at random), K services split into three
// contiguous classes, and Poisson demand with a per-user Zipf popularity order.

#pragma once

#include "edgeplace/model.hpp"

#include <cstdint>

namespace edgeplace {

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

struct GeneratorConfig {
    int M = 5;
    int N = 600;
    int links = 800;
    int K = 100;
    double R = 200.0;
    double C = 250.0;
    int T = 300;

    // per class: storage r, bandwidth c
    Range vs_r{1, 10}, vs_c{1, 25};
    Range ar_r{2, 20}, ar_c{0.2, 2};
    Range ng_r{5, 40}, ng_c{1, 25};

    Range d{1, 5};
    Range b{5, 10};
    Range kappa{30, 90};     // l_{m,k} = kappa_m / r_k
    double zipf_s = 0.8;
    Range user_rate{0.5, 2};
    /// Request rates are scaled down when the expected bandwidth demand would
    /// exceed this fraction of sum C_m. 0 disables the throttle.
    double load_factor = 0.6;
    double overflow_penalty = -1.0;  // default 10 * max d
};

/// Throws std::invalid_argument on nonpositive sizes or links < N.
Instance generate(const GeneratorConfig& cfg, std::uint64_t seed);

/// Scales N, K, links and T by `factor` in (0, 1], rounding up, minimum 1.
GeneratorConfig scale(const GeneratorConfig& cfg, double factor);

}  // namespace edgeplace
