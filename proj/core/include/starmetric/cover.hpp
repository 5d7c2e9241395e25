#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "starmetric/space.hpp"

namespace starmetric {

struct CoverMember {
    std::vector<std::size_t> pts;  // sorted, unique
    std::optional<std::size_t> center;
    double radius = 0.0;
};

/// A cover of a finite space by point-index sets, typically balls. The union
/// of the members must be the whole point set.
class Cover {
public:
    Cover(StarSpace space, std::vector<CoverMember> members);
    Cover(StarSpace space, std::vector<std::vector<std::size_t>> sets);

    const StarSpace& space() const { return space_; }
    const std::vector<CoverMember>& members() const { return members_; }
    bool member_contains(std::size_t m, std::size_t point) const;

private:
    StarSpace space_;
    std::vector<CoverMember> members_;
    std::vector<char> mask_;  // members x points
};

/// st(x, U): union of the members containing x.
std::vector<std::size_t> star(const Cover& cover, std::size_t x);
/// st(A, U): union of the pointwise stars of A.
std::vector<std::size_t> star(const Cover& cover, std::span<const std::size_t> target);

struct RefineResult {
    bool pass = false;
    std::optional<std::size_t> witness_member;  // first fine member that escapes
};

/// Every fine member inside some coarse member.
RefineResult refines(const Cover& fine, const Cover& coarse);
/// {st(V, fine) : V in fine} refines coarse.
RefineResult star_refines(const Cover& fine, const Cover& coarse);

/// The family B_{1/n}: one open ball of radius 1/n per point.
Cover ball_cover(const StarSpace& space, long long n);

/// Certificate that the ball covers behave as a countable uniformity base
/// around 1/n0, following the metrization proof:
///   r1 with r1 (*) r1 (*) r1 < 1/n0, then n1 with 1/n1 < r1, then the star
///   refinement of B_{1/n1} into B_{1/n0} is checked exhaustively, as is the
///   separating cover for every distinct pair (U4). U1 has no finite content
///   and is recorded as vacuous.
struct UniformityCertificate {
    int n0 = 0;
    long long n1 = 0;
    double r1 = 0.0;
    bool u2_pass = false;  // B_{1/n1} refines B_{1/n0}
    bool u3_pass = false;  // B_{1/n1} star-refines B_{1/n0}
    bool u4_pass = false;  // every distinct pair separated at some n
    std::optional<std::size_t> u2_witness_member;
    std::optional<std::size_t> u3_witness_member;
    struct U4Entry {
        std::size_t x = 0, y = 0;
        long long n = 0;
        bool pass = false;
    };
    std::vector<U4Entry> u4_failures;
    long long u4_max_n = 0;
    std::optional<long long> minimal_n1;  // populated by the minimize option

    bool pass() const { return u2_pass && u3_pass && u4_pass; }
};

UniformityCertificate verify_uniformity_base(const StarSpace& space, int n0,
                                             double margin = 1e-6, bool minimize = false);

enum class NetStrategy { Packing, Cover };

struct EpsilonNet {
    double epsilon = 0.0;
    std::vector<std::size_t> centers;
    NetStrategy construction = NetStrategy::Packing;
};

/// Packing: repeatedly take the lowest-index uncovered point as a center
/// (centers end up pairwise >= epsilon apart). Cover: greedy max-coverage
/// center selection. Both outputs are epsilon-dense.
EpsilonNet greedy_net(const StarSpace& space, double epsilon, NetStrategy strategy);

struct DenseResult {
    bool pass = false;
    std::optional<std::size_t> witness;  // lowest uncovered index
};

DenseResult verify_dense(const StarSpace& space, std::span<const std::size_t> centers,
                         double epsilon);

/// Density of `centers` within `subset` only.
DenseResult verify_dense_in(const StarSpace& space, std::span<const std::size_t> centers,
                            std::span<const std::size_t> subset, double epsilon);

/// Subspace re-centering: an ambient net at joint_zero_radius(epsilon) is
/// moved onto subset points within that radius, producing centers inside the
/// subset that are epsilon-dense in it.
std::vector<std::size_t> subspace_net(const StarSpace& space,
                                      std::span<const std::size_t> subset, double epsilon,
                                      double margin = 1e-6);

/// |greedy packing net|: an upper bound on the optimal covering number.
std::size_t covering_number(const StarSpace& space, double epsilon);

/// sup of pairwise distances over the subset; 0 for the empty set.
double diameter(const StarSpace& space, std::span<const std::size_t> subset);
double diameter(const StarSpace& space);

/// inf over A of d(x, .); exactly 1 for the empty set.
double set_distance(const StarSpace& space, std::size_t x, std::span<const std::size_t> a);

/// {x : D(A, x) = 0}; equals A on finite spaces with distinct payloads.
std::vector<std::size_t> closure_members(const StarSpace& space,
                                         std::span<const std::size_t> a);

/// Constructive metrization witness: rho = all-pairs shortest path over the
/// complete graph weighted by the ★-metric. rho is an ordinary metric, sits
/// below d★ entrywise, and the table records two-sided ball-inclusion radii
/// on a geometric epsilon grid.
struct ChainMetricTable {
    std::size_t n = 0;
    std::vector<double> rho;  // row-major n*n

    struct EquivalenceEntry {
        double epsilon = 0.0;
        std::size_t center = 0;
        double delta_rho_in_d = 0.0;  // ball_rho(c, delta) inside ball_d(c, eps)
        double delta_d_in_rho = 0.0;  // ball_d(c, delta) inside ball_rho(c, eps)
    };
    std::vector<EquivalenceEntry> equivalence;

    double at(std::size_t x, std::size_t y) const { return rho[x * n + y]; }
};

/// Requires the space to pass check_axioms (PreconditionError otherwise).
ChainMetricTable chain_metric(const StarSpace& space, double axiom_tol = 1e-9);

/// Epsilon-net of a materialized product assembled from factor nets: fold
/// products shrink the factor radius through kfold_radius, max products use
/// epsilon directly. ConfigError when the space carries no product metadata.
EpsilonNet product_net(const StarSpace& product_space, double epsilon, double margin = 1e-6);

/// Epsilon-net of a disjoint union: union of the part nets.
EpsilonNet union_net(const StarSpace& union_space, double epsilon);

}  // namespace starmetric
