#pragma once

// Shared corpus generators and independent oracles for the test suites.
// Oracles deliberately reimplement checks along different routes than the
// library (naive loops, Dijkstra instead of Floyd-Warshall).

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "starmetric/construct.hpp"
#include "starmetric/space.hpp"

namespace testsupport {

using starmetric::Point;
using starmetric::StarSpace;
using starmetric::TDefiner;

inline StarSpace random_euclidean(std::size_t n, std::uint64_t seed, double scale = 2.0,
                                  std::size_t dim = 2) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, scale);
    std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
    for (auto& p : pts) {
        for (auto& c : p) c = uni(rng);
    }
    return StarSpace::euclidean(std::move(pts), TDefiner::lukasiewicz());
}

inline StarSpace random_sqrt_diff(std::size_t n, std::uint64_t seed, double max_value = 9.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, max_value);
    std::vector<double> values(n);
    for (auto& v : values) v = uni(rng);
    return StarSpace::sqrt_diff(std::move(values), TDefiner::power(2.0));
}

// d(x,y) = |x - y|^p on the line: its p-th root is |x - y|, so the power(p)
// definer's triangle inequality holds exactly.
inline StarSpace random_power_line(double p, std::size_t n, std::uint64_t seed,
                                   double scale = 2.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, scale);
    std::vector<Point> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i].coords = {uni(rng)};
    auto metric = [p](const Point& a, const Point& b) {
        return std::pow(std::fabs(a.coords[0] - b.coords[0]), p);
    };
    return StarSpace::derived(std::move(pts), TDefiner::power(p), metric, "power_line");
}

// Star-shaped ultrametric: d(x,y) = max(r_x, r_y) for distinct points.
// Every triple satisfies d(x,y) <= max(d(x,z), d(z,y)).
inline StarSpace random_ultrametric(std::size_t n, std::uint64_t seed, double lo = 0.2,
                                    double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(lo, hi);
    std::vector<Point> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        pts[i].coords = {uni(rng) + 1e-9 * static_cast<double>(i)};
    }
    auto metric = [](const Point& a, const Point& b) {
        if (a.same_payload(b)) return 0.0;
        return std::max(a.coords[0], b.coords[0]);
    };
    return StarSpace::derived(std::move(pts), TDefiner::maximum(), metric, "cap_max",
                              hi + 1e-6 * static_cast<double>(n));
}

// One space per built-in definer family, all passing check_axioms.
inline std::vector<StarSpace> definer_corpus(std::size_t n, std::uint64_t seed) {
    return {
        random_euclidean(n, seed),
        random_ultrametric(n, seed + 1),
        random_sqrt_diff(n, seed + 2),
        random_power_line(0.5, n, seed + 3),
        random_power_line(3.0, n, seed + 4),
    };
}

// Two tight ultrametric clusters (radius <= cluster_radius) glued by a
// disjoint union, so the cross-cluster distance is exactly 1.
inline StarSpace clustered_union(std::size_t per_cluster, std::uint64_t seed,
                                 double cluster_radius = 0.1) {
    auto part = [&](std::uint64_t s) {
        return random_ultrametric(per_cluster, s, cluster_radius / 10.0, cluster_radius);
    };
    return starmetric::disjoint_union({part(seed), part(seed + 1)});
}

// Naive axiom oracle: straightforward triple loop, no shared code with
// starmetric::check_axioms.
struct OracleAxioms {
    bool m1 = true, m2 = true, m3 = true;
    std::size_t m3_x = 0, m3_y = 0, m3_z = 0;
};

inline OracleAxioms oracle_check_axioms(const StarSpace& s, double tol = 1e-9) {
    OracleAxioms out;
    const std::size_t n = s.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const bool eq = s.point(i).same_payload(s.point(j));
            if ((s.dist(i, j) == 0.0) != eq) out.m1 = false;
            if (std::fabs(s.dist(i, j) - s.dist(j, i)) >
                tol * std::max({1.0, s.dist(i, j), s.dist(j, i)})) {
                out.m2 = false;
            }
        }
    }
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            for (std::size_t z = 0; z < n; ++z) {
                const double rhs = s.definer().eval(s.dist(x, z), s.dist(z, y));
                if (s.dist(x, y) > rhs * (1.0 + tol) + 1e-12) {
                    if (out.m3) {
                        out.m3 = false;
                        out.m3_x = x;
                        out.m3_y = y;
                        out.m3_z = z;
                    }
                }
            }
        }
    }
    return out;
}

// Independent shortest-path oracle: Dijkstra from one source over the
// complete graph weighted by the space metric.
inline std::vector<double> oracle_dijkstra(const StarSpace& s, std::size_t source) {
    const std::size_t n = s.size();
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<char> done(n, 0);
    dist[source] = 0.0;
    for (std::size_t round = 0; round < n; ++round) {
        std::size_t u = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (!done[i] && (u == n || dist[i] < dist[u])) u = i;
        }
        if (u == n) break;
        done[u] = 1;
        for (std::size_t v = 0; v < n; ++v) {
            if (!done[v]) dist[v] = std::min(dist[v], dist[u] + s.dist(u, v));
        }
    }
    return dist;
}

}  // namespace testsupport
