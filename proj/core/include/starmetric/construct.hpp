#pragma once

#include <memory>
#include <span>
#include <vector>

#include "starmetric/space.hpp"

namespace starmetric {

enum class ProductMode { Fold, Max };

/// Factor metadata attached to materialized product spaces. Flat indices are
/// mixed-radix with factor 0 most significant.
struct ProductInfo {
    std::vector<StarSpace> factors;
    ProductMode mode = ProductMode::Fold;
    std::vector<std::size_t> strides;

    std::vector<std::size_t> factor_indices(std::size_t flat) const;
    std::size_t flat_index(std::span<const std::size_t> tuple) const;
};

/// Leaf parts of a disjoint union (nested unions are flattened).
struct UnionInfo {
    std::vector<StarSpace> parts;
    std::vector<std::size_t> offsets;  // start of each part in the union index range

    std::size_t part_of(std::size_t flat) const;
    std::size_t local_of(std::size_t flat) const;
};

/// min{1, d}: same point set and definer, distances capped at 1. Open balls
/// of radius below 1 coincide with the original space's.
StarSpace truncate(const StarSpace& space);

/// Cartesian product carrying either the folded metric
/// d(x,y) = d1(x1,y1) (*) ... (*) dn(xn,yn), folded left to right, or the
/// max metric. All factors must share one definer. Materializes the full
/// point set; throws SizeError above `cap` points (use LazyProduct instead).
StarSpace product(std::vector<StarSpace> factors, ProductMode mode, std::size_t cap = 10000);

/// Evaluator-only product for sizes past the materialization cap.
class LazyProduct {
public:
    LazyProduct(std::vector<StarSpace> factors, ProductMode mode);

    std::size_t total_size() const;
    double dist(std::span<const std::size_t> x, std::span<const std::size_t> y) const;
    const std::vector<StarSpace>& factors() const { return factors_; }
    ProductMode mode() const { return mode_; }

    StarSpace materialize(std::size_t cap = 10000) const;

private:
    std::vector<StarSpace> factors_;
    ProductMode mode_;
};

/// Disjoint union: same-part distances from the part metric, cross-part
/// distances exactly 1. Every part must have distances <= 1; with
/// auto_truncate set, violating parts are truncated first, otherwise a
/// BoundError names the offending pair. Parts that are themselves unions
/// are absorbed (the cross-part constant makes flattening exact).
StarSpace disjoint_union(std::vector<StarSpace> parts, bool auto_truncate = false);

}  // namespace starmetric
