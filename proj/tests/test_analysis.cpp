#include <cmath>
#include <random>

#include "doctest.h"
#include "starmetric/analysis.hpp"
#include "starmetric/construct.hpp"
#include "starmetric/errors.hpp"
#include "support.hpp"

using namespace starmetric;

namespace {

SequenceTrace inv_n_sq_trace() {
    auto gen = [](std::size_t n) { return 1.0 / (static_cast<double>(n) * n); };
    std::vector<double> terms;
    for (std::size_t n = 1; n <= 64; ++n) terms.push_back(gen(n));
    return SequenceTrace::analytic(AnalyticSpace::sqrt_diff_halfline(), std::move(terms), gen);
}

SequenceTrace alternating_trace(std::size_t len = 64) {
    auto gen = [](std::size_t n) { return n % 2 == 1 ? 0.0 : 1.0; };
    std::vector<double> terms;
    for (std::size_t n = 1; n <= len; ++n) terms.push_back(gen(n));
    return SequenceTrace::analytic(AnalyticSpace::lukasiewicz_interval(0.0, 1.0),
                                   std::move(terms), gen);
}

ModulusSchedule rows(std::initializer_list<ScheduleRow> rs) {
    ModulusSchedule s;
    s.rows = rs;
    s.validate();
    return s;
}

}  // namespace

TEST_CASE("constant sequences converge under any schedule") {
    std::vector<double> terms(32, 3.0);
    const auto trace =
        SequenceTrace::analytic(AnalyticSpace::sqrt_diff_halfline(), std::move(terms));
    const auto r = converges_to(trace, 3.0, rows({{0.5, 1}, {0.01, 1}, {1e-9, 1}}));
    CHECK(r.pass);
    CHECK(r.prefix_certificate);
}

TEST_CASE("1/n^2 converges to 0 with sqrt_diff distance 1/n^2") {
    const auto trace = inv_n_sq_trace();
    // d(0, 1/n^2) = 1/n^2 < 2^-k once n > 2^(k/2).
    ModulusSchedule sched;
    for (int k = 1; k <= 8; ++k) {
        const auto n = static_cast<std::size_t>(std::floor(std::pow(2.0, k / 2.0))) + 1;
        sched.rows.push_back({std::pow(2.0, -k), n});
    }
    sched.validate();
    const auto r = converges_to(trace, 0.0, sched);
    CHECK(r.pass);

    // One step earlier at the last row breaks exactly at that term.
    ModulusSchedule premature = sched;
    premature.rows.back().threshold = 16;  // 1/16^2 = 2^-8, not strictly below
    const auto bad = converges_to(trace, 0.0, premature);
    CHECK_FALSE(bad.pass);
    REQUIRE(bad.witness.has_value());
    CHECK(bad.witness->m == 16);
}

TEST_CASE("alternating sequence does not converge to 0") {
    const auto r = converges_to(alternating_trace(), 0.0, rows({{0.5, 3}}));
    CHECK_FALSE(r.pass);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->m == 4);  // first term past N=3 at value 1
    CHECK(r.witness->value == 1.0);
}

TEST_CASE("geometric partial sums are Cauchy with N_k = k+1") {
    auto gen = [](std::size_t n) { return 1.0 - std::pow(0.5, static_cast<double>(n)); };
    std::vector<double> terms;
    for (std::size_t n = 1; n <= 40; ++n) terms.push_back(gen(n));
    const auto trace = SequenceTrace::analytic(AnalyticSpace::lukasiewicz_interval(0.0, 1.0),
                                               std::move(terms), gen);
    ModulusSchedule sched;
    for (int k = 1; k <= 10; ++k) {
        sched.rows.push_back({std::pow(2.0, -k), static_cast<std::size_t>(k) + 1});
    }
    sched.validate();
    CHECK(is_cauchy_prefix(trace, sched).pass);
}

TEST_CASE("alternating sequence is not Cauchy") {
    const auto r = is_cauchy_prefix(alternating_trace(), rows({{0.5, 5}}));
    CHECK_FALSE(r.pass);
    REQUIRE(r.witness.has_value());
    // The witness pair reproduces the violation.
    CHECK(r.witness->value == 1.0);
    CHECK(r.witness->m >= 5);
    CHECK(r.witness->n >= 5);
}

TEST_CASE("short generator-less traces raise insufficient data") {
    std::vector<double> terms(5, 1.0);
    const auto trace =
        SequenceTrace::analytic(AnalyticSpace::lukasiewicz_interval(0.0, 2.0), std::move(terms));
    CHECK_THROWS_AS(converges_to(trace, 1.0, rows({{0.5, 10}})), InsufficientDataError);
    CHECK_THROWS_AS(is_cauchy_prefix(trace, rows({{0.5, 10}})), InsufficientDataError);
}

TEST_CASE("convergent implies Cauchy under the transformed schedule") {
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> uni(0.0, 4.0);
    const auto epsilons = ModulusSchedule::dyadic_epsilons(8);
    for (int rep = 0; rep < 100; ++rep) {
        const bool on_halfline = rep % 2 == 0;
        const double limit = uni(rng) + 0.5;
        const double amp = 0.1 + 0.4 * uni(rng);
        const double q = 0.3 + 0.1 * (rep % 4);
        auto gen = [limit, amp, q](std::size_t n) {
            return limit + amp * std::pow(q, static_cast<double>(n));
        };
        std::vector<double> terms;
        for (std::size_t n = 1; n <= 96; ++n) terms.push_back(gen(n));
        const auto trace =
            on_halfline
                ? SequenceTrace::analytic(AnalyticSpace::sqrt_diff_halfline(), terms, gen)
                : SequenceTrace::analytic(AnalyticSpace::lukasiewicz_interval(0.0, 10.0), terms,
                                          gen);

        const auto schedule = cauchy_schedule_from_convergence(trace, limit, epsilons);
        REQUIRE(schedule.has_value());
        CHECK(is_cauchy_prefix(trace, *schedule).pass);
    }
}

TEST_CASE("extraction pigeonholes the alternating trace onto the zeros") {
    const auto result = extract_cauchy_subsequence(alternating_trace(), 4);
    CHECK(result.achieved_depth == 4);
    REQUIRE(result.subsequence.size() == 4);
    // Even 0-based positions hold the zeros.
    CHECK(result.subsequence == std::vector<std::size_t>{0, 2, 4, 6});
    for (const auto& level : result.levels) {
        CHECK(level.center == 0);
    }
}

TEST_CASE("extraction of a repeated point is the identity") {
    std::vector<double> terms(10, 2.0);
    const auto trace =
        SequenceTrace::analytic(AnalyticSpace::sqrt_diff_halfline(), std::move(terms));
    const auto result = extract_cauchy_subsequence(trace, 5);
    CHECK(result.subsequence == std::vector<std::size_t>{0, 1, 2, 3, 4});

    CHECK_THROWS_AS(
        extract_cauchy_subsequence(
            SequenceTrace::analytic(AnalyticSpace::sqrt_diff_halfline(), {}), 3),
        InsufficientDataError);
}

TEST_CASE("extracted subsequences are Cauchy at radii-derived epsilons") {
    std::mt19937_64 rng(66);
    for (int rep = 0; rep < 20; ++rep) {
        // Noisy decaying-to-two-values trace so the pigeonhole has work to do.
        auto gen = [rep](std::size_t n) {
            const double base = n % 3 == 0 ? 2.0 : 0.5;
            return base + 0.25 / (static_cast<double>(n) + rep);
        };
        std::vector<double> terms;
        for (std::size_t n = 1; n <= 80; ++n) terms.push_back(gen(n));
        const auto trace =
            SequenceTrace::analytic(AnalyticSpace::sqrt_diff_halfline(), std::move(terms), gen);
        const int depth = 5;
        const auto result = extract_cauchy_subsequence(trace, depth);
        REQUIRE(result.achieved_depth == depth);

        const auto& def = trace.definer();
        std::vector<double> sub_terms;
        for (std::size_t pos : result.subsequence) {
            sub_terms.push_back(trace.scalar_term(pos));
        }
        const auto sub_trace = SequenceTrace::analytic(AnalyticSpace::sqrt_diff_halfline(),
                                                       std::move(sub_terms));
        ModulusSchedule sched;
        for (int k = 0; k < depth; ++k) {
            const double r = result.levels[k].radius;
            const double eps = def.eval(r, r) * (1.0 + 1e-9) + 1e-12;
            // joint_zero_radius recovers a radius at least r from this epsilon.
            CHECK(joint_zero_radius(def, eps) >= r * (1.0 - 1e-6));
            sched.rows.push_back({eps, static_cast<std::size_t>(k) + 1});
        }
        sched.validate();
        CHECK(is_cauchy_prefix(sub_trace, sched).pass);
    }
}

TEST_CASE("product traces project to per-factor Cauchy verdicts") {
    // Factor 0: points 0..9 walking toward 0; factor 1: two far points.
    std::vector<std::vector<double>> line;
    for (int i = 0; i < 10; ++i) line.push_back({std::pow(0.5, i)});
    const auto walk = StarSpace::euclidean(line);
    const auto two = StarSpace::euclidean({{0.0}, {5.0}});

    for (const auto mode : {ProductMode::Fold, ProductMode::Max}) {
        const auto p = product({walk, two}, mode);
        const ProductInfo& info = *p.product_info();

        // Trace: factor-0 term walks down, factor-1 pinned at 0.
        std::vector<std::size_t> terms;
        for (std::size_t i = 0; i < 10; ++i) {
            terms.push_back(info.flat_index(std::vector<std::size_t>{i, 0}));
        }
        const auto trace = SequenceTrace::finite(p, terms);
        const auto sched = rows({{0.6, 3}, {0.2, 5}});
        const auto report = project_product_cauchy(trace, sched);
        CHECK(report.product.pass);
        REQUIRE(report.factors.size() == 2);
        CHECK(report.factors[0].pass);
        CHECK(report.factors[1].pass);

        // Flip factor 1 between far points: that factor and the product fail.
        std::vector<std::size_t> bad_terms;
        for (std::size_t i = 0; i < 10; ++i) {
            bad_terms.push_back(info.flat_index(std::vector<std::size_t>{i, i % 2}));
        }
        const auto bad = project_product_cauchy(SequenceTrace::finite(p, bad_terms), sched);
        CHECK_FALSE(bad.factors[1].pass);
        CHECK_FALSE(bad.product.pass);
    }
}

TEST_CASE("mode-max product pass forces factor passes on random traces") {
    std::mt19937_64 rng(88);
    for (int rep = 0; rep < 30; ++rep) {
        const auto f1 = testsupport::random_euclidean(6, rng(), 1.0);
        const auto f2 = testsupport::random_euclidean(5, rng(), 1.0);
        const auto p = product({f1, f2}, ProductMode::Max);
        std::vector<std::size_t> terms;
        for (int t = 0; t < 24; ++t) terms.push_back(rng() % p.size());
        const auto report = project_product_cauchy(SequenceTrace::finite(p, terms),
                                                   rows({{0.9, 4}, {0.45, 8}}));
        if (report.product.pass) {
            for (const auto& f : report.factors) CHECK(f.pass);
        }
    }
}

TEST_CASE("cantor intersection pins the shared center") {
    NestedFamilySpec family{AnalyticSpace::sqrt_diff_halfline(), {}};
    for (int n = 1; n <= 22; ++n) family.balls.push_back({4.0, std::pow(2.0, -n)});
    const auto cert = cantor_intersection(family, 1e-6);
    CHECK(cert.point == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(cert.max_center_gap <= 0.0);
    CHECK(cert.cauchy_ok);
    CHECK(cert.uniqueness_gap <= 4.0 * std::pow(2.0, -22) + 1e-12);

    // Shrinking [0, 1/n]-style family on the unit interval.
    NestedFamilySpec tail{AnalyticSpace::lukasiewicz_interval(0.0, 1.0), {}};
    for (int n = 1; n <= 21; ++n) tail.balls.push_back({0.0, std::pow(2.0, -n)});
    const auto zero = cantor_intersection(tail, 1e-6);
    CHECK(zero.point == doctest::Approx(0.0));
    CHECK(zero.uniqueness_gap <= std::pow(2.0, -21) + 1e-12);
}

TEST_CASE("cantor rejects broken families") {
    NestedFamilySpec drift{AnalyticSpace::lukasiewicz_interval(0.0, 5.0), {}};
    drift.balls.push_back({1.0, 0.5});
    drift.balls.push_back({3.0, 1e-7});  // disjoint from the first ball
    CHECK_THROWS_AS(cantor_intersection(drift, 1e-6), InvalidFamilyError);

    NestedFamilySpec shallow{AnalyticSpace::lukasiewicz_interval(0.0, 5.0), {}};
    shallow.balls.push_back({1.0, 0.5});
    CHECK_THROWS_AS(cantor_intersection(shallow, 1e-6), ConfigError);

    NestedFamilySpec growing{AnalyticSpace::lukasiewicz_interval(0.0, 5.0), {}};
    growing.balls.push_back({1.0, 0.25});
    growing.balls.push_back({1.0, 0.5});
    CHECK_THROWS_AS(cantor_intersection(growing, 1e-6), ConfigError);
}

TEST_CASE("baire construction dodges excluded points") {
    const auto space = AnalyticSpace::lukasiewicz_interval(0.0, 1.0);
    std::vector<DenseOpenSet> sets;
    std::vector<double> excluded;
    for (int k = 1; k <= 10; ++k) {
        excluded.push_back(k / 11.0);
        sets.push_back(exclude_point_set(excluded.back()));
    }
    const auto cert = baire_point(space, sets, 10, 7);
    REQUIRE(cert.steps.size() == 10);
    CHECK(cert.steps[0].eps < 0.25);
    for (std::size_t i = 1; i < cert.steps.size(); ++i) {
        CHECK(cert.steps[i].eps < cert.steps[i - 1].eps / 2.0);
    }
    for (double q : excluded) CHECK(cert.point != q);
    for (bool v : cert.verdicts) CHECK(v);
    // The returned point sits inside every recorded ball.
    for (const auto& step : cert.steps) {
        CHECK(space.dist(step.x, cert.point) <= step.eps);
    }
}

TEST_CASE("baire trivially passes on whole-space sets and fails on empty ones") {
    const auto space = AnalyticSpace::sqrt_diff_halfline();
    const std::vector<DenseOpenSet> all(5, whole_space_set());
    const auto cert = baire_point(space, all, 5, 1);
    CHECK(cert.verdicts == std::vector<bool>(5, true));

    std::vector<DenseOpenSet> broken{empty_dense_set()};
    try {
        baire_point(space, broken, 1, 1);
        FAIL("expected DensityViolationError");
    } catch (const DensityViolationError& e) {
        CHECK(e.level == 1);
    }
}
