#include <random>

#include "doctest.h"
#include "starmetric/construct.hpp"
#include "starmetric/cover.hpp"
#include "starmetric/errors.hpp"
#include "support.hpp"

using namespace starmetric;

TEST_CASE("truncate caps distances at 1 and keeps small ones") {
    const auto s = StarSpace::sqrt_diff({1.0, 16.0, 25.0});
    const auto t = truncate(s);
    CHECK(t.dist(0, 2) == 1.0);   // was 16
    CHECK(t.dist(1, 2) == 1.0);   // was exactly 1
    CHECK(t.dist(0, 0) == 0.0);
    CHECK(t.declared_bound() == 1.0);

    const auto u = truncate(StarSpace::euclidean({{0.0}, {0.5}}));
    CHECK(u.dist(0, 1) == 0.5);
}

TEST_CASE("truncated balls match original balls below radius 1") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const auto s = testsupport::random_euclidean(14, seed, 3.0);
        const auto t = truncate(s);
        for (int k = 1; k <= 9; ++k) {
            const double eps = k / 10.0;
            for (std::size_t c = 0; c < s.size(); ++c) {
                CHECK(ball(s, c, eps) == ball(t, c, eps));
            }
        }
    }
}

TEST_CASE("product distances: fold and max") {
    const auto line_a = StarSpace::euclidean({{0.0}, {1.0}});
    const auto line_b = StarSpace::euclidean({{0.0}, {2.0}});
    const auto fold = product({line_a, line_b}, ProductMode::Fold);
    const auto max = product({line_a, line_b}, ProductMode::Max);
    REQUIRE(fold.size() == 4);

    // x = (0,0) is flat index 0; y = (1,2) is flat index 3.
    CHECK(fold.dist(0, 3) == 3.0);  // 1 (*) 2 under lukasiewicz
    CHECK(max.dist(0, 3) == 2.0);

    // Single-factor product is the factor.
    const auto single = product({line_b}, ProductMode::Fold);
    CHECK(single.dist(0, 1) == line_b.dist(0, 1));
    const auto single_max = product({line_b}, ProductMode::Max);
    CHECK(single_max.dist(0, 1) == line_b.dist(0, 1));
}

TEST_CASE("product rejects mismatched definers and oversize requests") {
    const auto a = StarSpace::euclidean({{0.0}, {1.0}});
    const auto b = StarSpace::sqrt_diff({0.0, 1.0});  // power(2) definer
    CHECK_THROWS_AS(product({a, b}, ProductMode::Fold), ConfigError);

    const auto big = testsupport::random_euclidean(30, 1);
    CHECK_THROWS_AS(product({big, big, big}, ProductMode::Fold, 10000), SizeError);
    // The lazy route still evaluates.
    const LazyProduct lazy({big, big, big}, ProductMode::Fold);
    CHECK(lazy.total_size() == 27000);
    const std::vector<std::size_t> x{0, 1, 2}, y{3, 4, 5};
    CHECK(lazy.dist(x, y) ==
          doctest::Approx(big.dist(0, 3) + big.dist(1, 4) + big.dist(2, 5)));
}

TEST_CASE("product payload queries decompose the coordinates") {
    const auto plane = product({StarSpace::euclidean({{0.0}, {1.0}}),
                                StarSpace::euclidean({{0.0}, {2.0}})},
                               ProductMode::Fold);
    Point q;
    q.coords = {0.25, 0.5};
    // Distance to (0,0): |0.25| + |0.5|.
    CHECK(plane.dist_to(q, 0) == doctest::Approx(0.75));
}

TEST_CASE("projection contraction for mode max") {
    const auto f1 = testsupport::random_euclidean(5, 2);
    const auto f2 = testsupport::random_euclidean(4, 3);
    const auto p = product({f1, f2}, ProductMode::Max);
    const ProductInfo& info = *p.product_info();
    for (std::size_t x = 0; x < p.size(); ++x) {
        for (std::size_t y = 0; y < p.size(); ++y) {
            const auto tx = info.factor_indices(x), ty = info.factor_indices(y);
            CHECK(f1.dist(tx[0], ty[0]) <= p.dist(x, y) + 1e-15);
            CHECK(f2.dist(tx[1], ty[1]) <= p.dist(x, y) + 1e-15);
        }
    }
}

TEST_CASE("disjoint union distances") {
    const auto a = StarSpace::euclidean({{0.0}, {0.25}});
    const auto b = StarSpace::euclidean({{10.0}, {10.5}});
    const auto u = disjoint_union({a, b});
    REQUIRE(u.size() == 4);
    CHECK(u.dist(0, 1) == 0.25);        // same part
    CHECK(u.dist(2, 3) == 0.5);
    CHECK(u.dist(0, 2) == 1.0);         // cross part, bit-exact
    CHECK(u.dist(1, 3) == 1.0);
    CHECK(u.id(0) == "p0:0");

    const auto lone = disjoint_union({a});
    CHECK(lone.dist(0, 1) == a.dist(0, 1));
}

TEST_CASE("disjoint union bound handling") {
    const auto wide = StarSpace::euclidean({{0.0}, {3.0}});
    const auto ok = StarSpace::euclidean({{0.0}, {0.5}});
    CHECK_THROWS_AS(disjoint_union({ok, wide}), BoundError);
    CHECK_THROWS_WITH_AS(disjoint_union({ok, wide}), doctest::Contains("part 1"), BoundError);

    const auto u = disjoint_union({ok, wide}, true);  // auto-truncate
    CHECK(u.dist(2, 3) == 1.0);  // truncated part distance
    CHECK(u.dist(0, 1) == 0.5);
}

TEST_CASE("nested unions flatten") {
    const auto a = StarSpace::euclidean({{0.0}, {0.1}});
    const auto b = StarSpace::euclidean({{0.0}, {0.2}});
    const auto c = StarSpace::euclidean({{0.0}, {0.3}});
    const auto inner = disjoint_union({a, b});
    const auto outer = disjoint_union({inner, c});
    REQUIRE(outer.union_info() != nullptr);
    CHECK(outer.union_info()->parts.size() == 3);
    CHECK(outer.size() == 6);
    // Points from the two inner parts stay 1 apart, and payload identity
    // keeps the duplicated coordinate 0.0 points distinct.
    CHECK(outer.dist(0, 2) == 1.0);
    CHECK(check_axioms(outer).all_pass());
}

TEST_CASE("union payload queries need a part tag") {
    const auto u = disjoint_union({StarSpace::euclidean({{0.0}, {0.5}}),
                                   StarSpace::euclidean({{0.0}, {0.25}})});
    Point q;
    q.coords = {0.1};
    CHECK_THROWS_AS(u.dist_to(q, 0), ConfigError);
    q.tag = 1;
    CHECK(u.dist_to(q, 2) == doctest::Approx(0.1));  // same part
    CHECK(u.dist_to(q, 0) == 1.0);                   // cross part
}

TEST_CASE("constructions stay inside the axioms on random inputs") {
    std::mt19937_64 rng(77);
    for (int rep = 0; rep < 25; ++rep) {
        const std::uint64_t seed = rng();
        const std::size_t n = 3 + seed % 6;
        const auto corpus = testsupport::definer_corpus(n, seed);
        for (const auto& s : corpus) {
            CAPTURE(s.metric_kind());
            CHECK(check_axioms(truncate(s)).all_pass());
            CHECK(check_axioms(product({s, s}, ProductMode::Fold)).all_pass());
            CHECK(check_axioms(product({s, s}, ProductMode::Max)).all_pass());
            CHECK(check_axioms(disjoint_union({truncate(s), truncate(s)})).all_pass());
        }
    }
}
