#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "starmetric/space.hpp"

namespace starmetric {

/// A finite prefix of a point sequence, either scalar terms on an analytic
/// exemplar or index terms on a finite space. Positions are 1-based in
/// reports (x_1, x_2, ...). An optional generator (1-based index to value)
/// lets checks extend the prefix on demand.
class SequenceTrace {
public:
    using Generator = std::function<double(std::size_t)>;

    static SequenceTrace analytic(AnalyticSpace space, std::vector<double> terms,
                                  Generator generator = nullptr);
    static SequenceTrace finite(StarSpace space, std::vector<std::size_t> term_indices);

    std::size_t length() const;
    bool has_generator() const { return static_cast<bool>(generator_); }

    /// Distance between the terms at 0-based positions m and n.
    double term_dist(std::size_t m, std::size_t n) const;
    /// Distance from a scalar limit (analytic traces only).
    double dist_to_limit(double limit, std::size_t n) const;
    /// Distance from a limit point index (finite traces only).
    double dist_to_limit_index(std::size_t limit, std::size_t n) const;

    const AnalyticSpace* analytic_space() const;
    const StarSpace* finite_space() const;
    const TDefiner& definer() const;

    double scalar_term(std::size_t n) const;        // analytic
    std::size_t index_term(std::size_t n) const;    // finite

    /// Copy with the prefix extended to at least `len` via the generator;
    /// throws InsufficientDataError when too short and generator-less.
    SequenceTrace extended_to(std::size_t len) const;

private:
    SequenceTrace() = default;
    std::optional<AnalyticSpace> analytic_;
    std::optional<StarSpace> finite_;
    std::vector<double> scalar_terms_;
    std::vector<std::size_t> index_terms_;
    Generator generator_;
};

struct ScheduleRow {
    double epsilon = 0.0;
    std::size_t threshold = 1;  // 1-based position N_k
};

/// Strictly decreasing epsilons with per-row thresholds.
struct ModulusSchedule {
    std::vector<ScheduleRow> rows;

    /// epsilon_k = 2^-k for k = 1..k_max, thresholds to fill in.
    static std::vector<double> dyadic_epsilons(int k_max = 20);
    static ModulusSchedule uniform(std::span<const double> epsilons, std::size_t threshold);

    void validate() const;
    std::size_t max_threshold() const;
};

struct SequenceWitness {
    std::size_t row = 0;      // schedule row index
    double epsilon = 0.0;
    std::size_t m = 0;        // 1-based positions
    std::size_t n = 0;        // second position for pair witnesses, else 0
    double value = 0.0;
};

/// A finite-prefix certificate: a pass never proves the property for the
/// infinite sequence and is flagged as such.
struct SequenceReport {
    bool pass = false;
    std::optional<SequenceWitness> witness;
    std::vector<ScheduleRow> rows;
    std::size_t probed_length = 0;
    bool prefix_certificate = true;
};

/// d(limit, x_n) < epsilon_k for every probed n >= N_k.
SequenceReport converges_to(const SequenceTrace& trace, double limit,
                            const ModulusSchedule& schedule);
SequenceReport converges_to_index(const SequenceTrace& trace, std::size_t limit,
                                  const ModulusSchedule& schedule);

/// d(x_m, x_n) < epsilon_k for every probed pair m, n >= N_k.
SequenceReport is_cauchy_prefix(const SequenceTrace& trace, const ModulusSchedule& schedule);

/// Minimal thresholds making the property hold on the prefix; nullopt rows
/// where no threshold works are a failure.
std::optional<ModulusSchedule> derive_convergence_schedule(const SequenceTrace& trace,
                                                           double limit,
                                                           std::span<const double> epsilons);
std::optional<ModulusSchedule> derive_cauchy_schedule(const SequenceTrace& trace,
                                                      std::span<const double> epsilons);

/// Cauchy schedule implied by a convergence schedule: each target epsilon is
/// reached once all terms sit within joint_zero_radius(epsilon) of the limit
/// (the convergent-implies-Cauchy argument run forward).
std::optional<ModulusSchedule> cauchy_schedule_from_convergence(
    const SequenceTrace& trace, double limit, std::span<const double> target_epsilons,
    double margin = 1e-6);

/// Pigeonhole extraction of a Cauchy subsequence along shrinking radii.
struct ExtractionLevel {
    double radius = 0.0;
    std::size_t center = 0;               // 0-based trace position of the ball center
    std::vector<std::size_t> retained;    // 0-based positions inside the ball
};

struct ExtractionResult {
    std::vector<std::size_t> subsequence;  // strictly increasing 0-based positions
    std::vector<ExtractionLevel> levels;
    int requested_depth = 0;
    int achieved_depth = 0;
};

/// Candidate ball centers per level; defaults to every retained position.
using NetOracle =
    std::function<std::vector<std::size_t>(double radius, const std::vector<std::size_t>&)>;

/// Level k uses radius radius_of(k) (default 1/k). At each level the
/// candidate ball retaining the most positions wins, ties to the lowest
/// center position; one strictly increasing position is emitted per level.
/// Stops early (best effort) when no later position remains.
ExtractionResult extract_cauchy_subsequence(const SequenceTrace& trace, int depth,
                                            NetOracle oracle = nullptr,
                                            std::function<double(int)> radius_of = nullptr);

/// Coordinate verdicts for a trace on a materialized product: each factor
/// trace is checked against the same schedule (a coordinate distance never
/// exceeds the product distance in either mode).
struct ProductCauchyReport {
    SequenceReport product;
    std::vector<SequenceReport> factors;
};

ProductCauchyReport project_product_cauchy(const SequenceTrace& trace,
                                           const ModulusSchedule& schedule);

/// Closed metric balls with strictly decreasing radii on an analytic
/// exemplar, declared nested.
struct BallSpec {
    double center = 0.0;
    double radius = 0.0;
};

struct NestedFamilySpec {
    AnalyticSpace space;
    std::vector<BallSpec> balls;
};

struct CantorCertificate {
    double point = 0.0;
    std::vector<double> diameters;    // delta(F_k), geometric subsample for large families
    double max_center_gap = 0.0;      // max_k max(0, d(point, center_k) - radius_k)
    double uniqueness_gap = 0.0;      // delta(F_deepest)
    bool cauchy_ok = true;            // sampled d(x_n, x_m) <= delta(F_m)
    std::size_t depth = 0;
};

/// Runs the nested-closed-set argument: iterates x_k through the family,
/// certifies the Cauchy bound through set diameters, and returns the deepest
/// iterate. Radii must decrease strictly to <= tol. Nesting violations raise
/// InvalidFamilyError.
CantorCertificate cantor_intersection(const NestedFamilySpec& family, double tol);

/// A dense open subset of an analytic exemplar, decidable at a point,
/// sampleable inside any open ball, with a positive interior radius at its
/// members (how far a closed ball around x stays inside the set).
struct DenseOpenSet {
    std::function<bool(double)> contains;
    std::function<std::optional<double>(const AnalyticSpace&, double, double, std::mt19937_64&)>
        sample;  // (space, ball center, ball radius, rng) -> member or nullopt
    std::function<double(const AnalyticSpace&, double)> interior_radius;
    std::string label;
};

DenseOpenSet whole_space_set();
DenseOpenSet exclude_point_set(double q);
DenseOpenSet empty_dense_set();  // never samples; exercises the failure path

struct BaireStep {
    double x = 0.0;
    double eps = 0.0;
};

struct BaireCertificate {
    double point = 0.0;
    std::vector<BaireStep> steps;
    std::vector<bool> verdicts;  // A_k(point) for k = 1..depth
};

/// The Baire construction to the given depth: x_1 in A_1 with eps_1 < 1/4,
/// then x_{n+1} in A_{n+1} inside B(x_n, eps_n) with eps_{n+1} < eps_n / 2
/// and certified closed-ball containment. Sampler failure raises
/// DensityViolationError naming the level.
BaireCertificate baire_point(const AnalyticSpace& space, const std::vector<DenseOpenSet>& sets,
                             int depth, std::uint64_t seed);

}  // namespace starmetric
