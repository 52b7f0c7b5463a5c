#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>

#include "projmerge/conductors.hpp"

using namespace projmerge;

namespace {

Conductor random_conductor(std::mt19937_64& gen, std::uint64_t n, std::uint64_t d,
                           std::uint32_t m) {
    std::vector<std::uint8_t> table(n * d);
    for (auto& v : table) v = static_cast<std::uint8_t>(gen() % m);
    return Conductor(n, d, m, std::move(table));
}

}  // namespace

TEST_CASE("miss profile hand check") {
    // x=0 hits {0,0}; x=1 hits {1,2}; x=2 hits {2,2}
    Conductor c(3, 2, 3, {0, 0, 1, 2, 2, 2});
    std::vector<bool> s = {true, false, false};  // S = {0}, |S| = 1
    auto mp = miss_profile(c, s);
    CHECK(mp.hit_counts == std::vector<std::uint64_t>{2, 0, 0});
    CHECK(mp.totally_misses == std::vector<bool>{false, true, true});
    // mostly: hits < (1/2)(1/3)(2) = 1/3, so only hits = 0 qualify
    CHECK(mp.mostly_misses == std::vector<bool>{false, true, true});

    std::vector<bool> s2 = {false, false, true};  // S = {2}
    auto mp2 = miss_profile(c, s2);
    CHECK(mp2.hit_counts == std::vector<std::uint64_t>{0, 1, 2});
    CHECK(mp2.mostly_misses == std::vector<bool>{true, false, false});
    CHECK_THROWS_AS(miss_profile(c, std::vector<bool>(2, true)), std::invalid_argument);
}

TEST_CASE("mostly-miss threshold is strict") {
    // one left vertex, two edges, M=2, S = {0}: hits = 1 vs threshold
    // (1/2)(1/2)(2) = 1/2; 1 > 1/2 so not mostly missing
    Conductor c(1, 2, 2, {0, 1});
    auto mp = miss_profile(c, {true, false});
    CHECK(!mp.mostly_misses[0]);
    // hits = 0 against |S| = 1: 0 < 1/2 -> mostly missing
    auto mp2 = miss_profile(c, {false, true});
    CHECK(!mp2.mostly_misses[0]);  // hits = 1 of the edges into S = {1}
    Conductor c2(1, 2, 2, {0, 0});
    CHECK(miss_profile(c2, {false, true}).mostly_misses[0]);
}

TEST_CASE("abnormality probability exact vs direct subset count") {
    // hand-enumerable: M = 4, lambda = 1/2 -> all 6 two-subsets
    Conductor c(2, 2, 4, {0, 1, 2, 3});  // x=0 -> {0,1}, x=1 -> {2,3}
    auto r = abnormality_probability(c, Rat(1, 2));
    REQUIRE(r.exact);
    CHECK(r.subsets_total == 6);
    // mostly miss: hits < (1/2)(2/4)(2) = 1/2 -> totally miss; S = {0,1}
    // misses x=1, S = {2,3} misses x=0, every mixed subset hits both
    // but hits = 1 for each x... 1 < 1/2 is false, so only the two split
    // subsets have a mostly-missing vertex
    CHECK(r.subsets_with_mostly_miss == 2);
    CHECK(r.probability == Rat(2, 6));
}

TEST_CASE("lambda validation") {
    Conductor c(2, 2, 4, {0, 1, 2, 3});
    CHECK_THROWS_AS(abnormality_probability(c, Rat(1, 3)), std::invalid_argument);
    CHECK_THROWS_AS(abnormality_probability(c, Rat(0)), std::invalid_argument);
    CHECK_THROWS_AS(abnormality_probability(c, Rat(2)), std::invalid_argument);
}

TEST_CASE("monte carlo agrees with exact enumeration") {
    std::mt19937_64 gen(31);
    auto c = random_conductor(gen, 8, 2, 4);
    auto exact = abnormality_probability(c, Rat(1, 2));
    REQUIRE(exact.exact);
    // force the Monte Carlo path with a tiny budget
    setenv("PROJMERGE_BUDGET", "2", 1);
    auto mc = abnormality_probability(c, Rat(1, 2), 100000, 7);
    unsetenv("PROJMERGE_BUDGET");
    REQUIRE(!mc.exact);
    CHECK(std::abs(to_double(mc.probability) - to_double(exact.probability)) < 0.02);
    CHECK(to_double(exact.probability) >= mc.ci_low - 0.02);
    CHECK(to_double(exact.probability) <= mc.ci_high + 0.02);
}

TEST_CASE("is_abnormal verdict") {
    // every subset has a mostly-missing vertex -> probability 1 -> never abnormal
    Conductor c(2, 2, 4, {0, 1, 2, 3});
    CHECK(is_abnormal(c, Rat(1, 2), Rat(1, 2)));  // 1/3 < 1 - 1/2
    CHECK(!is_abnormal(c, Rat(3, 4), Rat(1, 2))); // 1/3 >= 1 - 3/4
}

TEST_CASE("slice conductor extracts rows") {
    // t=2 table over [2]^2 with D=2
    std::vector<std::uint8_t> table = {0, 1, 1, 0, 1, 1, 0, 0};
    MergerTable e(2, 2, 2, 2, table);
    auto c0 = slice_conductor(e, 0);
    CHECK(c0.at(0, 0) == 0);  // E((0,0), 0)
    CHECK(c0.at(0, 1) == 1);
    CHECK(c0.at(1, 0) == 1);  // E((1,0), 0)
    CHECK(c0.at(1, 1) == 1);
    auto c1 = slice_conductor(e, 1);
    CHECK(c1.at(0, 0) == 1);  // E((0,1), 0)
    CHECK(c1.at(1, 0) == 0);  // E((1,1), 0)
    CHECK_THROWS_AS(slice_conductor(e, 2), std::out_of_range);
}

TEST_CASE("find abnormal slice precondition") {
    MergerTable e(2, 2, 2, 2, std::vector<std::uint8_t>(8, 0));
    CHECK_THROWS_AS(find_abnormal_slice(e, Rat(1, 2), Rat(1, 2), Rat(1, 4)),
                    std::invalid_argument);
}

TEST_CASE("micro nonexistence verdicts") {
    // seedless D=1, M=2 at eps = 1/4: no table over [2]^2 passes
    auto r = exhaustive_merger_nonexistence(2, 1, 2, Rat(1, 4));
    CHECK(r.none_exists);
    CHECK(r.tables_checked == 16);
    CHECK(r.tables_passing == 0);
    // vacuous threshold
    auto r2 = exhaustive_merger_nonexistence(2, 1, 2, Rat(1));
    CHECK(!r2.none_exists);
    // with seeds, mergers do exist at eps = 1/2
    auto r3 = exhaustive_merger_nonexistence(2, 2, 2, Rat(1, 2));
    CHECK(!r3.none_exists);
    CHECK(r3.tables_passing > 0);
}
