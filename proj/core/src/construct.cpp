#include "starmetric/construct.hpp"

#include <algorithm>
#include <cmath>

#include "starmetric/errors.hpp"

namespace starmetric {

std::vector<std::size_t> ProductInfo::factor_indices(std::size_t flat) const {
    std::vector<std::size_t> tuple(factors.size());
    for (std::size_t k = 0; k < factors.size(); ++k) {
        tuple[k] = flat / strides[k];
        flat %= strides[k];
    }
    return tuple;
}

std::size_t ProductInfo::flat_index(std::span<const std::size_t> tuple) const {
    if (tuple.size() != factors.size()) throw ConfigError("tuple arity mismatch");
    std::size_t flat = 0;
    for (std::size_t k = 0; k < factors.size(); ++k) {
        if (tuple[k] >= factors[k].size()) throw std::out_of_range("factor index out of range");
        flat += tuple[k] * strides[k];
    }
    return flat;
}

std::size_t UnionInfo::part_of(std::size_t flat) const {
    auto it = std::upper_bound(offsets.begin(), offsets.end(), flat);
    return static_cast<std::size_t>(it - offsets.begin()) - 1;
}

std::size_t UnionInfo::local_of(std::size_t flat) const { return flat - offsets[part_of(flat)]; }

StarSpace truncate(const StarSpace& space) {
    const StarSpace inner = space;
    StarSpace::IndexMetric metric = [inner](std::size_t x, std::size_t y) {
        return std::min(1.0, inner.dist(x, y));
    };
    std::function<double(const Point&, std::size_t)> query;
    if (space.supports_payload_queries()) {
        query = [inner](const Point& q, std::size_t y) { return std::min(1.0, inner.dist_to(q, y)); };
    }
    return StarSpace::derived_indexed(space.points(), space.definer(), std::move(metric),
                                      std::move(query), "truncated:" + space.metric_kind(), 1.0);
}

namespace {

double combine(const TDefiner& def, ProductMode mode, std::span<const double> ds) {
    if (mode == ProductMode::Max) {
        double m = 0.0;
        for (double d : ds) m = std::max(m, d);
        return m;
    }
    return def.fold(ds);
}

}  // namespace

LazyProduct::LazyProduct(std::vector<StarSpace> factors, ProductMode mode)
    : factors_(std::move(factors)), mode_(mode) {
    if (factors_.empty()) throw ConfigError("product needs at least one factor");
    for (const auto& f : factors_) {
        if (!f.definer().same_operation(factors_[0].definer())) {
            throw ConfigError("product factors must share one definer");
        }
        if (f.size() == 0) throw ConfigError("product factors must be non-empty");
    }
}

std::size_t LazyProduct::total_size() const {
    std::size_t total = 1;
    for (const auto& f : factors_) {
        if (total > SIZE_MAX / f.size()) throw SizeError("product size overflows");
        total *= f.size();
    }
    return total;
}

double LazyProduct::dist(std::span<const std::size_t> x, std::span<const std::size_t> y) const {
    if (x.size() != factors_.size() || y.size() != factors_.size()) {
        throw ConfigError("tuple arity mismatch");
    }
    std::vector<double> ds(factors_.size());
    for (std::size_t k = 0; k < factors_.size(); ++k) {
        ds[k] = factors_[k].dist(x[k], y[k]);
    }
    return combine(factors_[0].definer(), mode_, ds);
}

StarSpace LazyProduct::materialize(std::size_t cap) const {
    const std::size_t total = total_size();
    if (total > cap) {
        throw SizeError("product of " + std::to_string(total) +
                        " points exceeds the materialization cap of " + std::to_string(cap));
    }

    auto info = std::make_shared<ProductInfo>();
    info->factors = factors_;
    info->mode = mode_;
    info->strides.assign(factors_.size(), 1);
    for (std::size_t k = factors_.size(); k-- > 1;) {
        info->strides[k - 1] = info->strides[k] * factors_[k].size();
    }

    // Payload queries need every factor to score payloads and a fixed
    // coordinate arity per factor to split a query vector.
    bool queryable = true;
    std::vector<std::size_t> arity(factors_.size(), 0);
    for (std::size_t k = 0; k < factors_.size(); ++k) {
        if (!factors_[k].supports_payload_queries()) queryable = false;
        const std::size_t dim = factors_[k].point(0).coords.size();
        if (dim == 0) queryable = false;
        for (std::size_t i = 0; i < factors_[k].size(); ++i) {
            if (factors_[k].point(i).coords.size() != dim) queryable = false;
        }
        arity[k] = dim;
    }

    std::vector<Point> pts(total);
    for (std::size_t flat = 0; flat < total; ++flat) {
        const auto tuple = info->factor_indices(flat);
        Point p;
        std::string id = "(";
        for (std::size_t k = 0; k < tuple.size(); ++k) {
            const Point& fp = factors_[k].point(tuple[k]);
            if (fp.coords.empty()) {
                // Opaque factor point: its index is the identity carrier.
                p.coords.push_back(static_cast<double>(tuple[k]));
            } else {
                p.coords.insert(p.coords.end(), fp.coords.begin(), fp.coords.end());
            }
            if (k) id += ",";
            id += fp.id;
        }
        p.id = id + ")";
        pts[flat] = std::move(p);
    }

    const auto factors = factors_;
    const auto mode = mode_;
    const TDefiner def = factors_[0].definer();
    StarSpace::IndexMetric metric = [factors, mode, def, info](std::size_t x, std::size_t y) {
        std::vector<double> ds(factors.size());
        std::size_t rx = x, ry = y;
        for (std::size_t k = 0; k < factors.size(); ++k) {
            ds[k] = factors[k].dist(rx / info->strides[k], ry / info->strides[k]);
            rx %= info->strides[k];
            ry %= info->strides[k];
        }
        return combine(def, mode, ds);
    };

    std::function<double(const Point&, std::size_t)> query;
    if (queryable) {
        query = [factors, mode, def, info, arity](const Point& q, std::size_t y) {
            std::size_t need = 0;
            for (std::size_t a : arity) need += a;
            if (q.coords.size() != need) {
                throw ConfigError("product query needs " + std::to_string(need) + " coordinates");
            }
            std::vector<double> ds(factors.size());
            std::size_t offset = 0, ry = y;
            for (std::size_t k = 0; k < factors.size(); ++k) {
                Point qk;
                qk.coords.assign(q.coords.begin() + offset, q.coords.begin() + offset + arity[k]);
                offset += arity[k];
                ds[k] = factors[k].dist_to(qk, ry / info->strides[k]);
                ry %= info->strides[k];
            }
            return combine(def, mode, ds);
        };
    }

    const std::string kind =
        mode_ == ProductMode::Fold ? "product_fold" : "product_max";
    return StarSpace::derived_indexed(std::move(pts), def, std::move(metric), std::move(query),
                                      kind, std::nullopt, info);
}

StarSpace product(std::vector<StarSpace> factors, ProductMode mode, std::size_t cap) {
    return LazyProduct(std::move(factors), mode).materialize(cap);
}

StarSpace disjoint_union(std::vector<StarSpace> parts, bool auto_truncate) {
    if (parts.empty()) throw ConfigError("disjoint_union needs at least one part");

    // Flatten nested unions: the cross-part constant 1 makes this exact.
    std::vector<StarSpace> leaves;
    for (const auto& p : parts) {
        if (const UnionInfo* inner = p.union_info()) {
            leaves.insert(leaves.end(), inner->parts.begin(), inner->parts.end());
        } else {
            leaves.push_back(p);
        }
    }

    for (const auto& leaf : leaves) {
        if (!leaf.definer().same_operation(leaves[0].definer())) {
            throw ConfigError("disjoint_union parts must share one definer");
        }
    }

    for (std::size_t k = 0; k < leaves.size(); ++k) {
        const auto b = leaves[k].declared_bound();
        bool ok = b.has_value() && *b <= 1.0;
        if (!ok) {
            ok = true;
            for (std::size_t i = 0; i < leaves[k].size() && ok; ++i) {
                for (std::size_t j = i + 1; j < leaves[k].size(); ++j) {
                    if (leaves[k].dist(i, j) > 1.0) {
                        if (auto_truncate) {
                            ok = false;
                            break;
                        }
                        throw BoundError("part " + std::to_string(k) + " pair (" + leaves[k].id(i) +
                                         ", " + leaves[k].id(j) + ") has distance " +
                                         std::to_string(leaves[k].dist(i, j)) +
                                         " > 1; pass auto_truncate or truncate it first");
                    }
                }
            }
        }
        if (!ok) leaves[k] = truncate(leaves[k]);
    }

    auto info = std::make_shared<UnionInfo>();
    info->parts = leaves;
    std::vector<Point> pts;
    for (std::size_t k = 0; k < leaves.size(); ++k) {
        info->offsets.push_back(pts.size());
        for (std::size_t i = 0; i < leaves[k].size(); ++i) {
            Point p = leaves[k].point(i);
            p.tag = static_cast<int>(k);
            p.id = "p" + std::to_string(k) + ":" + p.id;
            pts.push_back(std::move(p));
        }
    }

    StarSpace::IndexMetric metric = [info](std::size_t x, std::size_t y) {
        const std::size_t px = info->part_of(x), py = info->part_of(y);
        if (px != py) return 1.0;
        return info->parts[px].dist(x - info->offsets[px], y - info->offsets[py]);
    };
    std::function<double(const Point&, std::size_t)> query =
        [info](const Point& q, std::size_t y) {
            if (q.tag < 0 || static_cast<std::size_t>(q.tag) >= info->parts.size()) {
                throw ConfigError("union query payload needs a part tag");
            }
            const std::size_t py = info->part_of(y);
            if (static_cast<std::size_t>(q.tag) != py) return 1.0;
            Point local = q;
            local.tag = -1;
            return info->parts[py].dist_to(local, y - info->offsets[py]);
        };

    return StarSpace::derived_indexed(std::move(pts), leaves[0].definer(), std::move(metric),
                                      std::move(query), "disjoint_union", 1.0, nullptr, info);
}

}  // namespace starmetric
