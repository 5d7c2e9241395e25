#pragma once

#include <cstdint>
#include <vector>

#include "starmetric/space.hpp"

namespace starmetric {

/// Pivot table for exact nearest-neighbor search. Pivots are greedy-packing
/// net centers; the table holds d(p, x) for every pivot p and point x.
/// Read-only after build; concurrent queries are safe.
class PivotIndex {
public:
    PivotIndex(StarSpace space, double pivot_epsilon);

    const StarSpace& space() const { return space_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }
    double pivot_epsilon() const { return pivot_epsilon_; }
    double pivot_dist(std::size_t pivot_rank, std::size_t point) const {
        return table_[pivot_rank * space_.size() + point];
    }

private:
    StarSpace space_;
    double pivot_epsilon_;
    std::vector<std::size_t> pivots_;
    std::vector<double> table_;  // pivots x points, row-major
};

/// Packing net at pivot_epsilon (default: diameter / 4) plus the full
/// pivot-distance table. Throws ConfigError on an empty space.
PivotIndex build_index(const StarSpace& space, double pivot_epsilon);
PivotIndex build_index(const StarSpace& space);

struct NnResult {
    std::size_t index = 0;
    double distance = 0.0;
    std::size_t evals = 0;  // query-point distance evaluations performed
};

/// Full scan; ties break to the lowest index. evals = n.
NnResult nn_linear(const StarSpace& space, const Point& query);

/// Same answer as nn_linear, skipping candidates whose pivot lower bound
/// already exceeds the best distance seen. The bound inverts the
/// ★-triangle inequality through the definer:
///   d(q,p) <= d(q,x) (*) d(x,p)  implies  d(q,x) >= inf{t : t (*) d(p,x) >= d(q,p)}.
/// The bisection tolerance 1e-12 * (1 + c) is subtracted before comparing,
/// so a loose bound can only weaken pruning, never exactness.
NnResult nn_pruned(const PivotIndex& index, const Point& query);

}  // namespace starmetric
