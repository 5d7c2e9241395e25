#include "starmetric/neighbors.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "starmetric/cover.hpp"
#include "starmetric/errors.hpp"
#include "starmetric/parallel.hpp"

namespace starmetric {

PivotIndex::PivotIndex(StarSpace space, double pivot_epsilon)
    : space_(std::move(space)), pivot_epsilon_(pivot_epsilon) {
    if (space_.size() == 0) throw ConfigError("build_index needs a non-empty space");
    if (!(pivot_epsilon_ > 0.0)) throw DomainError("pivot epsilon must be positive");
    pivots_ = greedy_net(space_, pivot_epsilon_, NetStrategy::Packing).centers;
    const std::size_t n = space_.size();
    table_.assign(pivots_.size() * n, 0.0);
    parallel_chunks(pivots_.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
            for (std::size_t x = 0; x < n; ++x) {
                table_[p * n + x] = space_.dist(pivots_[p], x);
            }
        }
    });
}

PivotIndex build_index(const StarSpace& space, double pivot_epsilon) {
    return PivotIndex(space, pivot_epsilon);
}

PivotIndex build_index(const StarSpace& space) {
    const double diam = diameter(space);
    return PivotIndex(space, diam > 0.0 ? diam / 4.0 : 1.0);
}

NnResult nn_linear(const StarSpace& space, const Point& query) {
    if (space.size() == 0) throw ConfigError("nn_linear needs a non-empty space");
    NnResult best{0, space.dist_to(query, 0), 1};
    for (std::size_t i = 1; i < space.size(); ++i) {
        const double d = space.dist_to(query, i);
        ++best.evals;
        if (d < best.distance) {
            best.distance = d;
            best.index = i;
        }
    }
    return best;
}

NnResult nn_pruned(const PivotIndex& index, const Point& query) {
    const StarSpace& space = index.space();
    const std::size_t n = space.size();
    if (n == 0) throw ConfigError("nn_pruned needs a non-empty index");
    const TDefiner& def = space.definer();
    const auto& pivots = index.pivots();

    // Query-to-pivot distances up front; pivots are candidates too.
    std::vector<double> dq(pivots.size());
    std::vector<std::size_t> pivot_rank(n, SIZE_MAX);
    NnResult best{SIZE_MAX, 0.0, 0};
    for (std::size_t p = 0; p < pivots.size(); ++p) {
        dq[p] = space.dist_to(query, pivots[p]);
        ++best.evals;
        pivot_rank[pivots[p]] = p;
    }

    bool have_best = false;
    for (std::size_t x = 0; x < n; ++x) {
        double d;
        if (pivot_rank[x] != SIZE_MAX) {
            d = dq[pivot_rank[x]];  // already evaluated
        } else {
            if (have_best) {
                double lb = 0.0;
                for (std::size_t p = 0; p < pivots.size(); ++p) {
                    const double c = dq[p];
                    const double tol = 1e-12 * (1.0 + c);
                    const InverseBound inv = star_inverse_lower(def, c, index.pivot_dist(p, x), tol);
                    if (inv.capped) continue;  // no sound bound from this pivot
                    lb = std::max(lb, std::max(0.0, inv.value - tol));
                }
                if (lb > best.distance) {
#ifndef NDEBUG
                    assert(lb <= space.dist_to(query, x) + 1e-9);
#endif
                    continue;  // cannot beat or tie the incumbent
                }
            }
            d = space.dist_to(query, x);
            ++best.evals;
        }
        if (!have_best || d < best.distance) {
            best.distance = d;
            best.index = x;
            have_best = true;
        }
    }
    return best;
}

}  // namespace starmetric
