#include <cmath>
#include <random>

#include "doctest.h"
#include "starmetric/errors.hpp"
#include "starmetric/neighbors.hpp"
#include "support.hpp"

using namespace starmetric;

namespace {

Point scalar_query(double v, int tag = -1) {
    Point q;
    q.coords = {v};
    q.tag = tag;
    return q;
}

Point vector_query(std::vector<double> v) {
    Point q;
    q.coords = std::move(v);
    return q;
}

}  // namespace

TEST_CASE("build_index pivot selection") {
    const auto s = StarSpace::euclidean({{0.0}, {0.4}, {1.0}});
    const auto one = build_index(s, 5.0);
    CHECK(one.pivots() == std::vector<std::size_t>{0});

    const auto all = build_index(s, 0.05);
    CHECK(all.pivots().size() == 3);

    const auto two = build_index(s, 0.5);
    CHECK(two.pivots() == std::vector<std::size_t>{0, 2});
    for (std::size_t p = 0; p < two.pivots().size(); ++p) {
        for (std::size_t x = 0; x < s.size(); ++x) {
            CHECK(two.pivot_dist(p, x) == s.dist(two.pivots()[p], x));
        }
    }

    CHECK_THROWS_AS(build_index(StarSpace::euclidean({}), 1.0), ConfigError);
}

TEST_CASE("nn_linear basics") {
    const auto s = StarSpace::sqrt_diff({1.0, 16.0, 25.0});
    const auto hit = nn_linear(s, scalar_query(16.0));
    CHECK(hit.index == 1);
    CHECK(hit.distance == 0.0);
    CHECK(hit.evals == 3);

    // Query 17: (sqrt17 - 4)^2 beats both other candidates.
    const auto near = nn_linear(s, scalar_query(17.0));
    CHECK(near.index == 1);
    CHECK(near.distance == doctest::Approx(0.01515).epsilon(1e-2));

    // Equidistant points resolve to the lower index.
    const auto line = StarSpace::euclidean({{0.0}, {2.0}});
    CHECK(nn_linear(line, vector_query({1.0})).index == 0);
}

TEST_CASE("nn_pruned equals nn_linear on the paper space") {
    const auto s = StarSpace::sqrt_diff({1.0, 16.0, 25.0});
    const auto index = build_index(s);
    for (double q : {0.0, 1.0, 2.0, 16.5, 24.0, 25.0, 40.0}) {
        const auto lin = nn_linear(s, scalar_query(q));
        const auto prn = nn_pruned(index, scalar_query(q));
        CHECK(lin.index == prn.index);
        CHECK(lin.distance == prn.distance);
        CHECK(prn.evals <= lin.evals);
    }
}

TEST_CASE("pruned search is exact across random instances per family") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> uni(0.0, 2.5);
    int pruned_somewhere = 0;
    for (int rep = 0; rep < 12; ++rep) {
        for (const auto& s : testsupport::definer_corpus(48, rng())) {
            const auto index = build_index(s);
            for (int k = 0; k < 25; ++k) {
                Point q;
                if (s.point(0).coords.size() == 2) {
                    q = vector_query({uni(rng), uni(rng)});
                } else {
                    q = scalar_query(uni(rng));
                }
                const auto lin = nn_linear(s, q);
                const auto prn = nn_pruned(index, q);
                CAPTURE(s.metric_kind());
                CHECK(lin.index == prn.index);
                CHECK(lin.distance == prn.distance);
                CHECK(prn.evals <= lin.evals);
                if (prn.evals < lin.evals) ++pruned_somewhere;
            }
        }
    }
    CHECK(pruned_somewhere > 0);  // the bound must actually bite somewhere
}

TEST_CASE("pivot lower bounds never exceed the true distance") {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> uni(0.0, 3.0);
    for (const auto& s : testsupport::definer_corpus(32, 7)) {
        const auto& def = s.definer();
        const auto index = build_index(s);
        for (int k = 0; k < 40; ++k) {
            Point q = s.point(0).coords.size() == 2 ? vector_query({uni(rng), uni(rng)})
                                                    : scalar_query(uni(rng));
            for (std::size_t p = 0; p < index.pivots().size(); ++p) {
                const double c = s.dist_to(q, index.pivots()[p]);
                for (std::size_t x = 0; x < s.size(); ++x) {
                    const double tol = 1e-12 * (1.0 + c);
                    const auto inv = star_inverse_lower(def, c, index.pivot_dist(p, x), tol);
                    if (!inv.capped) {
                        CHECK(inv.value - tol <= s.dist_to(q, x) + 1e-9);
                    }
                }
            }
        }
    }
}

TEST_CASE("two tight clusters prune wholesale under the maximum definer") {
    const auto u = testsupport::clustered_union(50, 9);
    REQUIRE(u.size() == 100);
    const auto index = build_index(u);
    const Point q = scalar_query(0.05, 0);  // lives in part 0
    const auto lin = nn_linear(u, q);
    const auto prn = nn_pruned(index, q);
    CHECK(lin.index == prn.index);
    CHECK(lin.distance == prn.distance);
    CHECK(prn.evals < lin.evals);
    // Cluster B (part 1) should be skipped almost entirely.
    CHECK(prn.evals <= 60);
}
