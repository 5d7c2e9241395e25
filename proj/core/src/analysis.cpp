#include "starmetric/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "starmetric/construct.hpp"
#include "starmetric/errors.hpp"

namespace starmetric {

SequenceTrace SequenceTrace::analytic(AnalyticSpace space, std::vector<double> terms,
                                      Generator generator) {
    for (double t : terms) {
        if (!space.contains(t)) throw DomainError("trace term outside the analytic domain");
    }
    SequenceTrace trace;
    trace.analytic_ = std::move(space);
    trace.scalar_terms_ = std::move(terms);
    trace.generator_ = std::move(generator);
    return trace;
}

SequenceTrace SequenceTrace::finite(StarSpace space, std::vector<std::size_t> term_indices) {
    for (std::size_t i : term_indices) {
        if (i >= space.size()) throw std::out_of_range("trace term index out of range");
    }
    SequenceTrace trace;
    trace.finite_ = std::move(space);
    trace.index_terms_ = std::move(term_indices);
    return trace;
}

std::size_t SequenceTrace::length() const {
    return analytic_ ? scalar_terms_.size() : index_terms_.size();
}

double SequenceTrace::term_dist(std::size_t m, std::size_t n) const {
    if (analytic_) return analytic_->dist(scalar_terms_.at(m), scalar_terms_.at(n));
    return finite_->dist(index_terms_.at(m), index_terms_.at(n));
}

double SequenceTrace::dist_to_limit(double limit, std::size_t n) const {
    if (!analytic_) throw ConfigError("scalar limit needs an analytic trace");
    return analytic_->dist(limit, scalar_terms_.at(n));
}

double SequenceTrace::dist_to_limit_index(std::size_t limit, std::size_t n) const {
    if (!finite_) throw ConfigError("index limit needs a finite-space trace");
    return finite_->dist(limit, index_terms_.at(n));
}

const AnalyticSpace* SequenceTrace::analytic_space() const {
    return analytic_ ? &*analytic_ : nullptr;
}

const StarSpace* SequenceTrace::finite_space() const { return finite_ ? &*finite_ : nullptr; }

const TDefiner& SequenceTrace::definer() const {
    return analytic_ ? analytic_->definer() : finite_->definer();
}

double SequenceTrace::scalar_term(std::size_t n) const { return scalar_terms_.at(n); }

std::size_t SequenceTrace::index_term(std::size_t n) const { return index_terms_.at(n); }

SequenceTrace SequenceTrace::extended_to(std::size_t len) const {
    if (length() >= len) return *this;
    if (!generator_ || !analytic_) {
        throw InsufficientDataError("trace holds " + std::to_string(length()) +
                                    " terms, needs " + std::to_string(len) +
                                    " and has no generator");
    }
    SequenceTrace out = *this;
    for (std::size_t pos = out.scalar_terms_.size(); pos < len; ++pos) {
        const double v = generator_(pos + 1);  // 1-based sequence index
        if (!out.analytic_->contains(v)) {
            throw DomainError("generator produced a term outside the domain at n=" +
                              std::to_string(pos + 1));
        }
        out.scalar_terms_.push_back(v);
    }
    return out;
}

std::vector<double> ModulusSchedule::dyadic_epsilons(int k_max) {
    std::vector<double> eps;
    for (int k = 1; k <= k_max; ++k) eps.push_back(std::pow(2.0, -k));
    return eps;
}

ModulusSchedule ModulusSchedule::uniform(std::span<const double> epsilons,
                                         std::size_t threshold) {
    ModulusSchedule s;
    for (double e : epsilons) s.rows.push_back({e, threshold});
    s.validate();
    return s;
}

void ModulusSchedule::validate() const {
    if (rows.empty()) throw ConfigError("schedule needs at least one row");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!(rows[i].epsilon > 0.0)) throw ConfigError("schedule epsilons must be positive");
        if (i > 0 && !(rows[i].epsilon < rows[i - 1].epsilon)) {
            throw ConfigError("schedule epsilons must be strictly decreasing");
        }
        if (rows[i].threshold < 1) throw ConfigError("schedule thresholds are 1-based");
    }
}

std::size_t ModulusSchedule::max_threshold() const {
    std::size_t m = 1;
    for (const auto& r : rows) m = std::max(m, r.threshold);
    return m;
}

namespace {

constexpr std::size_t kProbeWindow = 64;

SequenceTrace prepare(const SequenceTrace& trace, std::size_t need) {
    if (trace.length() >= need) return trace;
    if (trace.has_generator()) return trace.extended_to(need + kProbeWindow);
    return trace.extended_to(need);  // throws InsufficientDataError
}

SequenceReport check_pointwise(const SequenceTrace& trace, const ModulusSchedule& schedule,
                               const std::function<double(std::size_t)>& dist_at) {
    schedule.validate();
    const SequenceTrace t = prepare(trace, schedule.max_threshold());
    const std::size_t len = t.length();

    SequenceReport report;
    report.rows = schedule.rows;
    report.probed_length = len;
    report.pass = true;
    for (std::size_t k = 0; k < schedule.rows.size() && report.pass; ++k) {
        const auto& row = schedule.rows[k];
        for (std::size_t pos = row.threshold - 1; pos < len; ++pos) {
            const double d = dist_at(pos);
            if (!(d < row.epsilon)) {
                report.pass = false;
                report.witness = SequenceWitness{k, row.epsilon, pos + 1, 0, d};
                break;
            }
        }
    }
    return report;
}

}  // namespace

SequenceReport converges_to(const SequenceTrace& trace, double limit,
                            const ModulusSchedule& schedule) {
    const SequenceTrace t = prepare(trace, schedule.max_threshold());
    return check_pointwise(t, schedule, [&](std::size_t pos) { return t.dist_to_limit(limit, pos); });
}

SequenceReport converges_to_index(const SequenceTrace& trace, std::size_t limit,
                                  const ModulusSchedule& schedule) {
    const SequenceTrace t = prepare(trace, schedule.max_threshold());
    return check_pointwise(t, schedule,
                           [&](std::size_t pos) { return t.dist_to_limit_index(limit, pos); });
}

namespace {

struct PairTail {
    std::vector<double> max_from;          // max pairwise distance among positions >= i
    std::vector<std::size_t> arg_m, arg_n; // witnessing pair (0-based)
};

PairTail pairwise_tail(const SequenceTrace& t) {
    const std::size_t len = t.length();
    PairTail tail;
    tail.max_from.assign(len, 0.0);
    tail.arg_m.assign(len, 0);
    tail.arg_n.assign(len, 0);
    for (std::size_t i = len; i-- > 0;) {
        double best = i + 1 < len ? tail.max_from[i + 1] : 0.0;
        std::size_t bm = i + 1 < len ? tail.arg_m[i + 1] : i;
        std::size_t bn = i + 1 < len ? tail.arg_n[i + 1] : i;
        for (std::size_t j = i + 1; j < len; ++j) {
            const double d = t.term_dist(i, j);
            if (d > best) {
                best = d;
                bm = i;
                bn = j;
            }
        }
        tail.max_from[i] = best;
        tail.arg_m[i] = bm;
        tail.arg_n[i] = bn;
    }
    return tail;
}

}  // namespace

SequenceReport is_cauchy_prefix(const SequenceTrace& trace, const ModulusSchedule& schedule) {
    schedule.validate();
    const SequenceTrace t = prepare(trace, schedule.max_threshold());
    const std::size_t len = t.length();
    const PairTail tail = pairwise_tail(t);

    SequenceReport report;
    report.rows = schedule.rows;
    report.probed_length = len;
    report.pass = true;
    for (std::size_t k = 0; k < schedule.rows.size(); ++k) {
        const auto& row = schedule.rows[k];
        const std::size_t from = row.threshold - 1;
        if (from >= len) continue;  // vacuous: no probed pair
        if (!(tail.max_from[from] < row.epsilon)) {
            report.pass = false;
            report.witness = SequenceWitness{k, row.epsilon, tail.arg_m[from] + 1,
                                             tail.arg_n[from] + 1, tail.max_from[from]};
            break;
        }
    }
    return report;
}

namespace {

std::optional<ModulusSchedule> derive_schedule(std::span<const double> epsilons,
                                               const std::vector<double>& tail_max) {
    const std::size_t len = tail_max.size();
    ModulusSchedule out;
    for (double eps : epsilons) {
        std::optional<std::size_t> found;
        for (std::size_t from = 0; from < len; ++from) {
            if (tail_max[from] < eps) {
                found = from + 1;  // 1-based
                break;
            }
        }
        if (!found) return std::nullopt;
        out.rows.push_back({eps, *found});
    }
    out.validate();
    return out;
}

}  // namespace

std::optional<ModulusSchedule> derive_convergence_schedule(const SequenceTrace& trace,
                                                           double limit,
                                                           std::span<const double> epsilons) {
    const std::size_t len = trace.length();
    if (len == 0) throw InsufficientDataError("empty trace");
    std::vector<double> tail(len, 0.0);
    double best = 0.0;
    for (std::size_t i = len; i-- > 0;) {
        best = std::max(best, trace.dist_to_limit(limit, i));
        tail[i] = best;
    }
    return derive_schedule(epsilons, tail);
}

std::optional<ModulusSchedule> derive_cauchy_schedule(const SequenceTrace& trace,
                                                      std::span<const double> epsilons) {
    if (trace.length() == 0) throw InsufficientDataError("empty trace");
    const PairTail tail = pairwise_tail(trace);
    return derive_schedule(epsilons, tail.max_from);
}

std::optional<ModulusSchedule> cauchy_schedule_from_convergence(
    const SequenceTrace& trace, double limit, std::span<const double> target_epsilons,
    double margin) {
    const TDefiner& def = trace.definer();
    std::vector<double> shrunk;
    for (double eps : target_epsilons) shrunk.push_back(joint_zero_radius(def, eps, margin));
    const auto conv = derive_convergence_schedule(trace, limit, shrunk);
    if (!conv) return std::nullopt;
    ModulusSchedule out;
    for (std::size_t k = 0; k < target_epsilons.size(); ++k) {
        out.rows.push_back({target_epsilons[k], conv->rows[k].threshold});
    }
    out.validate();
    return out;
}

ExtractionResult extract_cauchy_subsequence(const SequenceTrace& trace, int depth,
                                            NetOracle oracle,
                                            std::function<double(int)> radius_of) {
    if (trace.length() == 0) throw InsufficientDataError("empty trace");
    if (depth < 1) throw ConfigError("extraction depth must be >= 1");
    if (!radius_of) radius_of = [](int k) { return 1.0 / k; };

    ExtractionResult result;
    result.requested_depth = depth;

    std::vector<std::size_t> retained(trace.length());
    for (std::size_t i = 0; i < retained.size(); ++i) retained[i] = i;

    std::size_t last_pos = 0;
    bool have_last = false;
    for (int k = 1; k <= depth; ++k) {
        const double radius = radius_of(k);
        std::vector<std::size_t> candidates =
            oracle ? oracle(radius, retained) : retained;

        // Pigeonhole: the candidate ball keeping the most positions wins,
        // ties to the lowest center position.
        std::vector<std::size_t> best_set;
        std::size_t best_center = 0;
        for (std::size_t c : candidates) {
            std::vector<std::size_t> kept;
            for (std::size_t i : retained) {
                if (trace.term_dist(c, i) < radius) kept.push_back(i);
            }
            if (kept.size() > best_set.size()) {
                best_set = std::move(kept);
                best_center = c;
            }
        }
        if (best_set.empty()) break;  // degenerate oracle

        retained = best_set;
        result.levels.push_back({radius, best_center, retained});

        std::optional<std::size_t> next;
        for (std::size_t i : retained) {
            if (!have_last || i > last_pos) {
                next = i;
                break;
            }
        }
        if (!next) break;  // best effort: prefix exhausted
        last_pos = *next;
        have_last = true;
        result.subsequence.push_back(*next);
        result.achieved_depth = k;
    }
    return result;
}

ProductCauchyReport project_product_cauchy(const SequenceTrace& trace,
                                           const ModulusSchedule& schedule) {
    const StarSpace* space = trace.finite_space();
    if (space == nullptr || space->product_info() == nullptr) {
        throw ConfigError("project_product_cauchy needs a trace on a materialized product");
    }
    const ProductInfo& info = *space->product_info();

    ProductCauchyReport report;
    report.product = is_cauchy_prefix(trace, schedule);

    std::vector<std::vector<std::size_t>> factor_terms(info.factors.size());
    for (std::size_t pos = 0; pos < trace.length(); ++pos) {
        const auto tuple = info.factor_indices(trace.index_term(pos));
        for (std::size_t f = 0; f < info.factors.size(); ++f) {
            factor_terms[f].push_back(tuple[f]);
        }
    }
    for (std::size_t f = 0; f < info.factors.size(); ++f) {
        report.factors.push_back(is_cauchy_prefix(
            SequenceTrace::finite(info.factors[f], std::move(factor_terms[f])), schedule));
    }
    return report;
}

CantorCertificate cantor_intersection(const NestedFamilySpec& family, double tol) {
    if (!(tol > 0.0)) throw ConfigError("cantor_intersection needs tol > 0");
    if (family.balls.empty()) throw ConfigError("cantor_intersection needs a non-empty family");
    const auto& balls = family.balls;
    for (std::size_t k = 0; k < balls.size(); ++k) {
        if (!(balls[k].radius > 0.0)) throw ConfigError("ball radii must be positive");
        if (k > 0 && !(balls[k].radius < balls[k - 1].radius)) {
            throw ConfigError("ball radii must decrease strictly");
        }
    }
    if (balls.back().radius > tol) {
        throw ConfigError("family too shallow: deepest radius " +
                          std::to_string(balls.back().radius) + " exceeds tol");
    }

    const AnalyticSpace& space = family.space;
    std::vector<AnalyticSpace::Interval> sets(balls.size());
    for (std::size_t k = 0; k < balls.size(); ++k) {
        sets[k] = space.closed_ball(balls[k].center, balls[k].radius);
        if (k > 0 && !sets[k - 1].contains(sets[k])) {
            throw InvalidFamilyError("F_" + std::to_string(k + 1) + " is not inside F_" +
                                     std::to_string(k));
        }
    }

    CantorCertificate cert;
    cert.depth = balls.size();
    cert.point = balls.back().center;
    cert.uniqueness_gap = space.interval_diameter(sets.back());

    // Geometric index subsample keeps million-deep families cheap.
    std::vector<std::size_t> probe;
    for (std::size_t k = 0; k < balls.size(); k = k == 0 ? 1 : k * 2) probe.push_back(k);
    if (probe.empty() || probe.back() != balls.size() - 1) probe.push_back(balls.size() - 1);

    for (std::size_t k : probe) cert.diameters.push_back(space.interval_diameter(sets[k]));

    cert.max_center_gap = 0.0;
    for (std::size_t k = 0; k < balls.size(); ++k) {
        const double gap = space.dist(cert.point, balls[k].center) - balls[k].radius;
        cert.max_center_gap = std::max(cert.max_center_gap, gap);
    }

    cert.cauchy_ok = true;
    for (std::size_t a = 0; a < probe.size() && cert.cauchy_ok; ++a) {
        for (std::size_t b = a + 1; b < probe.size(); ++b) {
            const double d = space.dist(balls[probe[b]].center, balls[probe[a]].center);
            if (d > space.interval_diameter(sets[probe[a]]) + 1e-12) {
                cert.cauchy_ok = false;
                break;
            }
        }
    }
    return cert;
}

DenseOpenSet whole_space_set() {
    DenseOpenSet set;
    set.label = "whole_space";
    set.contains = [](double) { return true; };
    set.sample = [](const AnalyticSpace& space, double center, double radius,
                    std::mt19937_64& rng) -> std::optional<double> {
        const auto hull = space.open_ball_hull(center, radius);
        std::uniform_real_distribution<double> uni(hull.lo, hull.hi);
        for (int tries = 0; tries < 64; ++tries) {
            const double y = uni(rng);
            if (space.contains(y) && space.dist(center, y) < radius) return y;
        }
        return std::nullopt;
    };
    set.interior_radius = [](const AnalyticSpace&, double) {
        return std::numeric_limits<double>::infinity();
    };
    return set;
}

DenseOpenSet exclude_point_set(double q) {
    DenseOpenSet set;
    set.label = "exclude:" + std::to_string(q);
    set.contains = [q](double x) { return x != q; };
    set.sample = [q](const AnalyticSpace& space, double center, double radius,
                     std::mt19937_64& rng) -> std::optional<double> {
        const auto hull = space.open_ball_hull(center, radius);
        std::uniform_real_distribution<double> uni(hull.lo, hull.hi);
        for (int tries = 0; tries < 64; ++tries) {
            const double y = uni(rng);
            if (y != q && space.contains(y) && space.dist(center, y) < radius) return y;
        }
        return std::nullopt;
    };
    set.interior_radius = [q](const AnalyticSpace& space, double x) {
        if (!space.contains(q)) return std::numeric_limits<double>::infinity();
        return space.dist(x, q);
    };
    return set;
}

DenseOpenSet empty_dense_set() {
    DenseOpenSet set;
    set.label = "empty";
    set.contains = [](double) { return false; };
    set.sample = [](const AnalyticSpace&, double, double, std::mt19937_64&) {
        return std::optional<double>{};
    };
    set.interior_radius = [](const AnalyticSpace&, double) { return 0.0; };
    return set;
}

namespace {

// Largest e in (0, cap] with e (*) d <= cap * (1 - margin): a closed e-ball
// around a point at distance d stays inside the open cap-ball (via M3).
std::optional<double> containment_radius(const TDefiner& def, double cap, double d,
                                         double margin = 1e-12) {
    const double target = cap * (1.0 - margin);
    if (!(def.eval(0.0, d) <= target)) return std::nullopt;  // = d; sampler drew too close
    if (def.eval(cap, d) <= target) return cap;
    double lo = 0.0, hi = cap;
    for (int it = 0; it < 64; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (def.eval(mid, d) <= target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (lo <= 0.0) return std::nullopt;
    return lo;
}

}  // namespace

BaireCertificate baire_point(const AnalyticSpace& space, const std::vector<DenseOpenSet>& sets,
                             int depth, std::uint64_t seed) {
    if (depth < 1) throw ConfigError("baire_point needs depth >= 1");
    if (static_cast<int>(sets.size()) < depth) {
        throw ConfigError("baire_point needs one dense open set per level");
    }
    std::mt19937_64 rng(seed);
    const TDefiner& def = space.definer();

    // Base open ball: centered in a unit-ish window at the bottom of the domain.
    const double span = std::isfinite(space.domain_hi())
                            ? space.domain_hi() - space.domain_lo()
                            : 4.0;
    const double window = std::min(span, 4.0);
    double prev_x = space.domain_lo() + 0.5 * window;
    double prev_eps = std::min(space.dist(prev_x, space.domain_lo()),
                               space.dist(prev_x, space.domain_lo() + window));

    BaireCertificate cert;
    double cap = 0.25;  // the construction's 1/2^2 bound for eps_1
    for (int level = 1; level <= depth; ++level) {
        const DenseOpenSet& a = sets[level - 1];
        bool placed = false;
        for (int attempt = 0; attempt < 64 && !placed; ++attempt) {
            const auto y = a.sample(space, prev_x, prev_eps, rng);
            if (!y) break;
            if (!a.contains(*y) || !(space.dist(prev_x, *y) < prev_eps)) continue;
            const auto contain = containment_radius(def, prev_eps, space.dist(prev_x, *y));
            if (!contain) continue;
            const double clearance = a.interior_radius(space, *y);
            const double eps = 0.5 * std::min({cap, *contain, clearance});
            if (!(eps > 0.0)) continue;
            cert.steps.push_back({*y, eps});
            prev_x = *y;
            prev_eps = eps;
            cap = eps / 2.0;
            placed = true;
        }
        if (!placed) {
            throw DensityViolationError(
                level, "set '" + a.label + "' produced no point inside the level-" +
                           std::to_string(level) + " ball");
        }
    }

    cert.point = prev_x;
    for (int k = 0; k < depth; ++k) cert.verdicts.push_back(sets[k].contains(cert.point));
    return cert;
}

}  // namespace starmetric
