#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "starmetric/definer.hpp"

namespace starmetric {

struct ProductInfo;  // defined in construct.hpp
struct UnionInfo;    // defined in construct.hpp

/// A point of a finite space: numeric payload plus an optional part tag
/// (set by disjoint unions) and a display id for reports.
struct Point {
    std::vector<double> coords;
    int tag = -1;
    std::string id;

    /// Payload identity: bit-exact coordinates and tag; opaque (coordinate-
    /// free) points compare by id.
    bool same_payload(const Point& other) const;
};

/// A finite ★-metric space: an indexed point list, a t-definer, and a total
/// distance evaluator. Immutable after construction; copies share state and
/// are safe to read concurrently.
class StarSpace {
public:
    using IndexMetric = std::function<double(std::size_t, std::size_t)>;
    using PayloadMetric = std::function<double(const Point&, const Point&)>;

    /// Euclidean distance on vector payloads; the classical anchor when the
    /// definer is Lukasiewicz.
    static StarSpace euclidean(std::vector<std::vector<double>> pts,
                               TDefiner def = TDefiner::lukasiewicz(),
                               std::vector<std::string> ids = {});

    /// d(a,b) = (sqrt a - sqrt b)^2 on non-negative scalars; a ★-metric for
    /// the power(2) definer and the canonical non-metric example.
    static StarSpace sqrt_diff(std::vector<double> values,
                               TDefiner def = TDefiner::power(2.0),
                               std::vector<std::string> ids = {});

    /// d = 1 between distinct ids, 0 otherwise.
    static StarSpace discrete(std::vector<std::string> ids, TDefiner def = TDefiner::lukasiewicz());

    /// Distances given explicitly as a square matrix.
    static StarSpace explicit_matrix(std::vector<std::vector<double>> matrix, TDefiner def,
                                     std::vector<std::string> ids = {});

    /// Custom payload metric (used by constructions and exemplar samplers).
    static StarSpace derived(std::vector<Point> pts, TDefiner def, PayloadMetric metric,
                             std::string kind, std::optional<double> bound = std::nullopt);

    /// Custom index metric; `query` may be empty when payload queries are
    /// not meaningful (explicit matrices).
    static StarSpace derived_indexed(std::vector<Point> pts, TDefiner def, IndexMetric metric,
                                     std::function<double(const Point&, std::size_t)> query,
                                     std::string kind, std::optional<double> bound = std::nullopt,
                                     std::shared_ptr<const ProductInfo> product = nullptr,
                                     std::shared_ptr<const UnionInfo> parts = nullptr);

    std::size_t size() const;
    const Point& point(std::size_t i) const;
    const std::vector<Point>& points() const;
    const std::string& id(std::size_t i) const;
    std::optional<std::size_t> index_of_id(const std::string& id) const;

    double dist(std::size_t x, std::size_t y) const;

    /// Distance from an ad-hoc payload to a stored point. Falls back to the
    /// stored row when the payload coincides with a stored point; throws
    /// ConfigError when the metric cannot score fresh payloads.
    double dist_to(const Point& query, std::size_t y) const;
    bool supports_payload_queries() const;

    const TDefiner& definer() const;
    std::optional<double> declared_bound() const;
    const std::string& metric_kind() const;
    const ProductInfo* product_info() const;
    const UnionInfo* union_info() const;

    /// Identity of the underlying immutable state (not payload equality).
    bool same_space(const StarSpace& other) const;

    /// Materialized pairwise distances, row-major n*n.
    std::vector<double> distance_matrix() const;

private:
    struct Impl;
    explicit StarSpace(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

struct AxiomReport {
    struct M1Witness {
        std::size_t x = 0, y = 0;
        double d = 0.0;
        bool payload_equal = false;
    };
    struct M2Witness {
        std::size_t x = 0, y = 0;
        double dxy = 0.0, dyx = 0.0;
    };
    struct M3Witness {
        std::size_t x = 0, y = 0, z = 0;
        double lhs = 0.0;  // d(x,y)
        double rhs = 0.0;  // d(x,z) (*) d(z,y)
    };

    bool m1_pass = true;
    bool m2_pass = true;
    bool m3_pass = true;
    std::optional<M1Witness> m1_witness;
    std::optional<M2Witness> m2_witness;
    std::optional<M3Witness> m3_witness;
    std::size_t duplicate_payload_pairs = 0;  // informational, not a verdict
    std::uint64_t triples_checked = 0;
    double tol = 0.0;

    bool all_pass() const { return m1_pass && m2_pass && m3_pass; }
};

/// Brute-force verification of M1 (zero iff equal payload) over all pairs,
/// M2 over all pairs, and M3 over all ordered triples with slack
/// lhs <= rhs * (1 + tol) + 1e-12. Witnesses are the lexicographically first
/// violations. Throws SizeError above `cap` points.
AxiomReport check_axioms(const StarSpace& space, double tol = 1e-9, std::size_t cap = 500);

/// Open ball: indices at distance strictly below r from the center.
std::vector<std::size_t> ball(const StarSpace& space, std::size_t center, double r);

/// An analytic 1-D exemplar with a closed-form ★-metric: either
/// ([0,inf), (sqrt x - sqrt y)^2, power(2)) or ([a,b], |x-y|, Lukasiewicz).
/// Complete as a mathematical space; used by the sequence machinery.
class AnalyticSpace {
public:
    struct Interval {
        double lo = 0.0, hi = 0.0;
        bool contains(double x) const { return x >= lo && x <= hi; }
        bool contains(const Interval& inner) const { return inner.lo >= lo && inner.hi <= hi; }
    };

    static AnalyticSpace sqrt_diff_halfline();
    static AnalyticSpace lukasiewicz_interval(double lo, double hi);

    double dist(double x, double y) const;
    bool contains(double x) const;
    double domain_lo() const { return domain_.lo; }
    double domain_hi() const { return domain_.hi; }  // +inf on the half-line

    /// Closed metric ball {y : d(c,y) <= r} as a domain interval.
    Interval closed_ball(double center, double radius) const;
    /// Open metric ball, returned with its closure's endpoints.
    Interval open_ball_hull(double center, double radius) const;
    /// Diameter of an interval under the space metric (attained at endpoints).
    double interval_diameter(const Interval& iv) const;

    const TDefiner& definer() const { return definer_; }
    const std::string& name() const { return name_; }

    /// Finite sampled subspace with ids "s0", "s1", ...; uniform draws in
    /// [domain_lo, min(domain_hi, sample_hi)].
    StarSpace sample_space(std::size_t n, std::uint64_t seed, double sample_hi = 16.0) const;

private:
    enum class Kind { SqrtDiffHalfline, LukasiewiczInterval };
    AnalyticSpace(Kind k, Interval domain, TDefiner def, std::string name)
        : kind_(k), domain_(domain), definer_(std::move(def)), name_(std::move(name)) {}

    Kind kind_;
    Interval domain_;
    TDefiner definer_;
    std::string name_;
};

}  // namespace starmetric
