#include "starmetric/space.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_map>

#include "starmetric/errors.hpp"
#include "starmetric/parallel.hpp"

namespace starmetric {

namespace {

std::string default_id(std::size_t i) { return std::to_string(i); }

std::vector<Point> scalar_points(const std::vector<double>& values,
                                 std::vector<std::string> ids) {
    std::vector<Point> pts(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        pts[i].coords = {values[i]};
        pts[i].id = ids.empty() ? std::to_string(values[i]) : std::move(ids[i]);
    }
    return pts;
}

void require_distance(double d, std::size_t x, std::size_t y) {
    if (!std::isfinite(d) || d < 0.0) {
        throw DomainError("distance(" + std::to_string(x) + "," + std::to_string(y) +
                          ") left [0,inf): " + std::to_string(d));
    }
}

}  // namespace

bool Point::same_payload(const Point& other) const {
    if (tag != other.tag) return false;
    if (coords.size() != other.coords.size()) return false;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (coords[i] != other.coords[i]) return false;
    }
    if (coords.empty()) return id == other.id;
    return true;
}

struct StarSpace::Impl {
    std::vector<Point> points;
    TDefiner definer = TDefiner::lukasiewicz();
    IndexMetric index_metric;
    std::function<double(const Point&, std::size_t)> query_metric;  // may be empty
    std::string kind;
    std::optional<double> bound;
    std::shared_ptr<const ProductInfo> product;
    std::shared_ptr<const UnionInfo> parts;
    std::unordered_map<std::string, std::size_t> id_index;

    void finish() {
        id_index.reserve(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (points[i].id.empty()) points[i].id = default_id(i);
            id_index.emplace(points[i].id, i);
        }
    }
};

StarSpace StarSpace::euclidean(std::vector<std::vector<double>> pts, TDefiner def,
                               std::vector<std::string> ids) {
    if (!ids.empty() && ids.size() != pts.size()) {
        throw ConfigError("ids and point counts differ");
    }
    std::vector<Point> points(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (double c : pts[i]) {
            if (!std::isfinite(c)) throw DomainError("non-finite coordinate in point " + std::to_string(i));
        }
        points[i].coords = std::move(pts[i]);
        if (!ids.empty()) points[i].id = std::move(ids[i]);
    }
    auto metric = [](const Point& a, const Point& b) {
        if (a.coords.size() != b.coords.size()) {
            throw ConfigError("euclidean metric on mismatched dimensions");
        }
        double s = 0.0;
        for (std::size_t k = 0; k < a.coords.size(); ++k) {
            const double d = a.coords[k] - b.coords[k];
            s += d * d;
        }
        return std::sqrt(s);
    };
    return derived(std::move(points), std::move(def), metric, "euclidean");
}

StarSpace StarSpace::sqrt_diff(std::vector<double> values, TDefiner def,
                               std::vector<std::string> ids) {
    if (!ids.empty() && ids.size() != values.size()) {
        throw ConfigError("ids and value counts differ");
    }
    for (double v : values) {
        if (!std::isfinite(v) || v < 0.0) {
            throw DomainError("sqrt_diff payloads must be non-negative reals");
        }
    }
    auto metric = [](const Point& a, const Point& b) {
        const double d = std::sqrt(a.coords[0]) - std::sqrt(b.coords[0]);
        return d * d;
    };
    return derived(scalar_points(values, std::move(ids)), std::move(def), metric, "sqrt_diff");
}

StarSpace StarSpace::discrete(std::vector<std::string> ids, TDefiner def) {
    std::vector<Point> points(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) points[i].id = std::move(ids[i]);
    auto metric = [](const Point& a, const Point& b) {
        return a.same_payload(b) ? 0.0 : 1.0;
    };
    return derived(std::move(points), std::move(def), metric, "discrete", 1.0);
}

StarSpace StarSpace::explicit_matrix(std::vector<std::vector<double>> matrix, TDefiner def,
                                     std::vector<std::string> ids) {
    const std::size_t n = matrix.size();
    for (const auto& row : matrix) {
        if (row.size() != n) throw ConfigError("distance matrix must be square");
    }
    if (!ids.empty() && ids.size() != n) throw ConfigError("ids and matrix size differ");
    auto flat = std::make_shared<std::vector<double>>();
    flat->reserve(n * n);
    for (const auto& row : matrix) {
        for (double d : row) {
            if (!std::isfinite(d) || d < 0.0) {
                throw DomainError("matrix entries must be finite non-negative reals");
            }
            flat->push_back(d);
        }
    }
    std::vector<Point> points(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!ids.empty()) points[i].id = std::move(ids[i]);
    }
    auto impl = std::make_shared<Impl>();
    impl->points = std::move(points);
    impl->definer = std::move(def);
    impl->index_metric = [flat, n](std::size_t x, std::size_t y) { return (*flat)[x * n + y]; };
    impl->kind = "explicit_matrix";
    impl->finish();
    return StarSpace(std::move(impl));
}

StarSpace StarSpace::derived(std::vector<Point> pts, TDefiner def, PayloadMetric metric,
                             std::string kind, std::optional<double> bound) {
    auto impl = std::make_shared<Impl>();
    impl->points = std::move(pts);
    impl->definer = std::move(def);
    impl->kind = std::move(kind);
    impl->bound = bound;
    auto shared_metric = std::make_shared<PayloadMetric>(std::move(metric));
    const auto* points_ptr = &impl->points;
    impl->index_metric = [shared_metric, points_ptr](std::size_t x, std::size_t y) {
        return (*shared_metric)((*points_ptr)[x], (*points_ptr)[y]);
    };
    impl->query_metric = [shared_metric, points_ptr](const Point& q, std::size_t y) {
        return (*shared_metric)(q, (*points_ptr)[y]);
    };
    impl->finish();
    return StarSpace(std::move(impl));
}

StarSpace StarSpace::derived_indexed(std::vector<Point> pts, TDefiner def, IndexMetric metric,
                                     std::function<double(const Point&, std::size_t)> query,
                                     std::string kind, std::optional<double> bound,
                                     std::shared_ptr<const ProductInfo> product,
                                     std::shared_ptr<const UnionInfo> parts) {
    auto impl = std::make_shared<Impl>();
    impl->points = std::move(pts);
    impl->definer = std::move(def);
    impl->index_metric = std::move(metric);
    impl->query_metric = std::move(query);
    impl->kind = std::move(kind);
    impl->bound = bound;
    impl->product = std::move(product);
    impl->parts = std::move(parts);
    impl->finish();
    return StarSpace(std::move(impl));
}

std::size_t StarSpace::size() const { return impl_->points.size(); }

const Point& StarSpace::point(std::size_t i) const {
    if (i >= impl_->points.size()) throw std::out_of_range("point index " + std::to_string(i));
    return impl_->points[i];
}

const std::vector<Point>& StarSpace::points() const { return impl_->points; }

const std::string& StarSpace::id(std::size_t i) const { return point(i).id; }

std::optional<std::size_t> StarSpace::index_of_id(const std::string& id) const {
    auto it = impl_->id_index.find(id);
    if (it == impl_->id_index.end()) return std::nullopt;
    return it->second;
}

double StarSpace::dist(std::size_t x, std::size_t y) const {
    if (x >= size() || y >= size()) {
        throw std::out_of_range("dist index out of range: (" + std::to_string(x) + "," +
                                std::to_string(y) + ") on " + std::to_string(size()) + " points");
    }
    const double d = impl_->index_metric(x, y);
    require_distance(d, x, y);
    return d;
}

double StarSpace::dist_to(const Point& query, std::size_t y) const {
    if (y >= size()) throw std::out_of_range("dist_to index out of range");
    if (impl_->query_metric) {
        const double d = impl_->query_metric(query, y);
        require_distance(d, size(), y);
        return d;
    }
    // Matrix-backed space: resolve the payload to a stored point.
    for (std::size_t i = 0; i < size(); ++i) {
        if (impl_->points[i].same_payload(query)) return dist(i, y);
    }
    throw ConfigError("metric '" + impl_->kind + "' cannot score payloads outside the point set");
}

bool StarSpace::supports_payload_queries() const { return static_cast<bool>(impl_->query_metric); }

const TDefiner& StarSpace::definer() const { return impl_->definer; }

std::optional<double> StarSpace::declared_bound() const { return impl_->bound; }

const std::string& StarSpace::metric_kind() const { return impl_->kind; }

const ProductInfo* StarSpace::product_info() const { return impl_->product.get(); }

const UnionInfo* StarSpace::union_info() const { return impl_->parts.get(); }

bool StarSpace::same_space(const StarSpace& other) const { return impl_ == other.impl_; }

std::vector<double> StarSpace::distance_matrix() const {
    const std::size_t n = size();
    std::vector<double> m(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m[i * n + j] = dist(i, j);
    }
    return m;
}

AxiomReport check_axioms(const StarSpace& space, double tol, std::size_t cap) {
    const std::size_t n = space.size();
    if (n > cap) {
        throw SizeError("check_axioms: " + std::to_string(n) + " points exceeds the cap of " +
                        std::to_string(cap) + "; sample the space first");
    }
    AxiomReport report;
    report.tol = tol;

    const std::vector<double> d = space.distance_matrix();
    auto dd = [&](std::size_t x, std::size_t y) { return d[x * n + y]; };

    // M1 + M2 over all pairs, lexicographic scan.
    for (std::size_t x = 0; x < n && (report.m1_pass || report.m2_pass); ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            const bool equal = space.point(x).same_payload(space.point(y));
            if (equal && x != y) ++report.duplicate_payload_pairs;
            if (report.m1_pass) {
                const bool zero = dd(x, y) == 0.0;
                if (zero != equal) {
                    report.m1_pass = false;
                    report.m1_witness = AxiomReport::M1Witness{x, y, dd(x, y), equal};
                }
            }
            if (report.m2_pass && y > x) {
                const double dxy = dd(x, y), dyx = dd(y, x);
                if (std::fabs(dxy - dyx) > tol * std::max({1.0, dxy, dyx})) {
                    report.m2_pass = false;
                    report.m2_witness = AxiomReport::M2Witness{x, y, dxy, dyx};
                }
            }
        }
    }
    report.duplicate_payload_pairs /= 2;  // counted both orientations

    // M3 over all ordered triples; witness is the lexicographically first
    // violation, so chunks track their own first hit and we take the min.
    report.triples_checked = static_cast<std::uint64_t>(n) * n * n;
    const TDefiner& def = space.definer();
    std::atomic<std::uint64_t> first_violation{UINT64_MAX};
    parallel_chunks(n, [&](std::size_t x_lo, std::size_t x_hi) {
        std::uint64_t local_first = UINT64_MAX;
        for (std::size_t x = x_lo; x < x_hi && local_first == UINT64_MAX; ++x) {
            for (std::size_t y = 0; y < n && local_first == UINT64_MAX; ++y) {
                const double lhs = dd(x, y);
                for (std::size_t z = 0; z < n; ++z) {
                    const double rhs = def.eval(dd(x, z), dd(z, y));
                    if (lhs > rhs * (1.0 + tol) + 1e-12) {
                        local_first = (static_cast<std::uint64_t>(x) * n + y) * n + z;
                        break;
                    }
                }
            }
        }
        if (local_first != UINT64_MAX) {
            std::uint64_t seen = first_violation.load();
            while (local_first < seen && !first_violation.compare_exchange_weak(seen, local_first)) {
            }
        }
    });
    if (first_violation.load() != UINT64_MAX) {
        const std::uint64_t key = first_violation.load();
        const std::size_t z = key % n, y = (key / n) % n, x = key / n / n;
        report.m3_pass = false;
        report.m3_witness =
            AxiomReport::M3Witness{x, y, z, dd(x, y), def.eval(dd(x, z), dd(z, y))};
    }
    return report;
}

std::vector<std::size_t> ball(const StarSpace& space, std::size_t center, double r) {
    if (!(r > 0.0)) throw DomainError("ball needs r > 0");
    if (center >= space.size()) throw std::out_of_range("ball center out of range");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < space.size(); ++i) {
        if (space.dist(center, i) < r) out.push_back(i);
    }
    return out;
}

AnalyticSpace AnalyticSpace::sqrt_diff_halfline() {
    return AnalyticSpace(Kind::SqrtDiffHalfline,
                         {0.0, std::numeric_limits<double>::infinity()}, TDefiner::power(2.0),
                         "sqrt_diff_halfline");
}

AnalyticSpace AnalyticSpace::lukasiewicz_interval(double lo, double hi) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw ConfigError("lukasiewicz_interval needs finite lo < hi");
    }
    return AnalyticSpace(Kind::LukasiewiczInterval, {lo, hi}, TDefiner::lukasiewicz(),
                         "lukasiewicz_interval[" + std::to_string(lo) + "," + std::to_string(hi) +
                             "]");
}

double AnalyticSpace::dist(double x, double y) const {
    if (!contains(x) || !contains(y)) throw DomainError("point outside the analytic domain");
    switch (kind_) {
        case Kind::SqrtDiffHalfline: {
            const double d = std::sqrt(x) - std::sqrt(y);
            return d * d;
        }
        case Kind::LukasiewiczInterval: return std::fabs(x - y);
    }
    return 0.0;
}

bool AnalyticSpace::contains(double x) const {
    return std::isfinite(x) && x >= domain_.lo && x <= domain_.hi;
}

AnalyticSpace::Interval AnalyticSpace::closed_ball(double center, double radius) const {
    if (!contains(center)) throw DomainError("ball center outside the analytic domain");
    if (!(radius >= 0.0)) throw DomainError("ball radius must be >= 0");
    switch (kind_) {
        case Kind::SqrtDiffHalfline: {
            const double s = std::sqrt(center), t = std::sqrt(radius);
            const double lo = s > t ? (s - t) * (s - t) : 0.0;
            const double hi = (s + t) * (s + t);
            return {lo, hi};
        }
        case Kind::LukasiewiczInterval:
            return {std::max(domain_.lo, center - radius), std::min(domain_.hi, center + radius)};
    }
    return {center, center};
}

AnalyticSpace::Interval AnalyticSpace::open_ball_hull(double center, double radius) const {
    return closed_ball(center, radius);
}

double AnalyticSpace::interval_diameter(const Interval& iv) const {
    if (iv.hi < iv.lo) return 0.0;
    return dist(iv.lo, iv.hi);
}

StarSpace AnalyticSpace::sample_space(std::size_t n, std::uint64_t seed, double sample_hi) const {
    std::mt19937_64 rng(seed);
    const double hi = std::min(domain_.hi, sample_hi);
    std::uniform_real_distribution<double> uni(domain_.lo, hi);
    std::vector<double> values(n);
    for (auto& v : values) v = uni(rng);
    const AnalyticSpace self = *this;
    std::vector<Point> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        pts[i].coords = {values[i]};
        pts[i].id = "s" + std::to_string(i);
    }
    auto metric = [self](const Point& a, const Point& b) {
        return self.dist(a.coords[0], b.coords[0]);
    };
    return StarSpace::derived(std::move(pts), definer_, metric, name_ + ":sampled");
}

}  // namespace starmetric
