#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "projmerge/grid.hpp"
#include "projmerge/schemes.hpp"

using namespace projmerge;

TEST_CASE("maj3 projections are exactly 3/4") {
    // frozen values: every 2-dim projection of each part has size 3 at N=2
    // and 75 at N=10
    for (std::uint64_t n : {std::uint64_t{2}, std::uint64_t{10}}) {
        auto p = maj3_partition(n);
        const std::uint64_t expect = 3 * n * n / 4;
        auto table = projection_fraction_table(p, 2);
        REQUIRE(table.size() == 6);
        for (const auto& e : table) CHECK(e.size == expect);
    }
    CHECK_THROWS_AS(maj3_partition(7), std::invalid_argument);
}

TEST_CASE("maj3 parts are balanced") {
    auto p = maj3_partition(10);
    CHECK(p.part_mask(0).popcount() == 500);
    CHECK(p.part_mask(1).popcount() == 500);
}

TEST_CASE("gr3 figure variant frozen table at N=10") {
    auto p = gr3_partition(10, GrVariant::figure);
    auto table = projection_fraction_table(p, 2);
    // frozen by independent enumeration: (part, axes) -> size
    const std::uint64_t expect[3][3] = {{60, 36, 60}, {50, 64, 50}, {50, 64, 50}};
    std::size_t i = 0;
    for (std::uint32_t part = 0; part < 3; ++part)
        for (std::size_t ax = 0; ax < 3; ++ax, ++i) CHECK(table[i].size == expect[part][ax]);
    auto mx = max_projection(p, 2);
    CHECK(mx.size == 64);
    CHECK(mx.part == 1);
    CHECK(mx.axes.indices == std::vector<std::uint32_t>{0, 2});
}

TEST_CASE("gr3 figure variant approaches the golden ratio") {
    auto p = gr3_partition(100, GrVariant::figure);
    const double frac = to_double(max_projection(p, 2).fraction);
    CHECK(frac == doctest::Approx(0.618034).epsilon(0.02));
}

TEST_CASE("gr3 literal variant has full side projections") {
    // the literal thresholds leave part 2 with full XZ and YZ projections;
    // frozen max at N=10 is the whole 10x10 square
    auto p = gr3_partition(10, GrVariant::literal);
    auto mx = max_projection(p, 2);
    CHECK(mx.size == 100);
    CHECK(mx.part == 2);
    CHECK(mx.axes.indices == std::vector<std::uint32_t>{0, 2});
}

TEST_CASE("product partition is Shearer tight") {
    auto p = product_partition(4, 2, 2);
    CHECK(p.parts() == 4);
    // each part is a 2x2 block; every 1-dim projection has size 2 = N * (1/c)^(1/2)
    for (const auto& e : projection_fraction_table(p, 1)) CHECK(e.size == 2);
    CHECK_THROWS_AS(product_partition(5, 2, 2), std::invalid_argument);
    CHECK_THROWS_AS(product_partition(16, 4, 16), std::invalid_argument);  // 16^4 parts
}

TEST_CASE("threshold partition band sizes") {
    // N=2, t=3, cutoffs {1,2}: band of cells by count of high coordinates
    auto p = threshold_partition(2, 3, {1, 2});
    CHECK(p.parts() == 3);
    CHECK(p.part_mask(0).popcount() == 1);  // zero high coords
    CHECK(p.part_mask(1).popcount() == 3);  // exactly one
    CHECK(p.part_mask(2).popcount() == 4);  // two or three
    CHECK_THROWS_AS(threshold_partition(2, 3, {2, 1}), std::invalid_argument);
    CHECK_THROWS_AS(threshold_partition(2, 3, {1, 7}), std::invalid_argument);
}

TEST_CASE("threshold N=3 c=2 achieves the certified optimum") {
    // the two-band labeling at cutoff 2 has max 2-dim projection 8
    auto p = threshold_partition(3, 3, {2});
    CHECK(max_projection(p, 2).size == 8);
}

TEST_CASE("discretize threshold") {
    CHECK(discretize_threshold(0.5, 10) == 5);
    CHECK(discretize_threshold(0.618034, 10) == 6);
    CHECK(discretize_threshold(0.0, 10) == 0);
    CHECK(discretize_threshold(1.0, 10) == 10);
    CHECK_THROWS_AS(discretize_threshold(1.5, 10), std::domain_error);
}
