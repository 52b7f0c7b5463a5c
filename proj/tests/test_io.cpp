#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <random>
#include <set>

#include "projmerge/io.hpp"
#include "projmerge/schemes.hpp"

using namespace projmerge;

TEST_CASE("partition json round trip is bit exact") {
    std::mt19937_64 gen(41);
    for (std::uint32_t c : {2u, 3u, 11u, 36u}) {
        GridDims dims(3, 3);
        std::vector<std::uint8_t> labels(dims.cell_count());
        for (auto& l : labels) l = static_cast<std::uint8_t>(gen() % c);
        PartLabeling p(dims, c, labels);
        auto back = partition_from_json(partition_to_json(p));
        CHECK(back == p);
        // serialize again: identical bytes
        CHECK(partition_to_json(back) == partition_to_json(p));
    }
}

TEST_CASE("partition json format") {
    PartLabeling p(GridDims(2, 2), 2, {0, 1, 1, 0});
    CHECK(partition_to_json(p) == R"({"t":2,"n":2,"c":2,"labels":"0110"})");
    CHECK_THROWS(partition_from_json(R"({"t":2,"n":2,"c":2,"labels":"011"})"));
    CHECK_THROWS(partition_from_json(R"({"t":2,"n":2,"c":2,"labels":"013!"})"));
    CHECK_THROWS(partition_from_json(R"({"t":2,"n":2,"c":2,"labels":"0121"})"));
}

TEST_CASE("merger json round trip") {
    std::mt19937_64 gen(42);
    std::vector<std::uint8_t> table(2 * 2 * 2 * 3);
    for (auto& v : table) v = static_cast<std::uint8_t>(gen() % 5);
    MergerTable e(2, 3, 3, 5, table);
    auto back = merger_from_json(merger_to_json(e));
    CHECK(back == e);
}

TEST_CASE("conductor json round trip") {
    Conductor c(3, 2, 4, {0, 1, 2, 3, 3, 0});
    auto back = conductor_from_json(conductor_to_json(c));
    CHECK(back.n_vals == c.n_vals);
    CHECK(back.table == c.table);
    CHECK_THROWS(conductor_from_json(R"({"n_vals":2,"t":2,"d_vals":1,"m_vals":2,"table":"0101"})"));
}

TEST_CASE("file round trip") {
    const std::string path = "io_test_tmp.json";
    write_file(path, partition_to_json(maj3_partition(4)));
    CHECK(partition_from_json(read_file(path)) == maj3_partition(4));
    std::remove(path.c_str());
    CHECK_THROWS(read_file("does/not/exist.json"));
    CHECK_THROWS(write_file("no/such/dir/out.json", "x"));
}

TEST_CASE("svg rendering is deterministic") {
    auto p = maj3_partition(10);
    const AxisSubset xy({0, 1});
    const std::string a = render_projection_svg(p, xy);
    const std::string b = render_projection_svg(p, xy);
    CHECK(a == b);
    CHECK(a.find("<svg") == 0);
}

TEST_CASE("svg color structure reflects part subsets") {
    // maj3 XY projection: low-low corner is part 0 only, high-high corner is
    // part 1 only, mixed quadrants see both parts -> exactly 3 distinct fills
    auto p = maj3_partition(10);
    const std::string svg = render_projection_svg(p, AxisSubset({0, 1}));
    std::set<std::string> fills;
    std::size_t pos = 0;
    while ((pos = svg.find("fill=\"", pos)) != std::string::npos) {
        pos += 6;
        fills.insert(svg.substr(pos, svg.find('"', pos) - pos));
    }
    CHECK(fills.size() == 3);

    // single-part labeling renders in one color
    PartLabeling mono(GridDims(2, 4), 2, std::vector<std::uint8_t>(16, 1));
    const std::string msvg = render_projection_svg(mono, AxisSubset({0, 1}));
    std::set<std::string> mfills;
    pos = 0;
    while ((pos = msvg.find("fill=\"", pos)) != std::string::npos) {
        pos += 6;
        mfills.insert(msvg.substr(pos, msvg.find('"', pos) - pos));
    }
    CHECK(mfills.size() == 1);
}

TEST_CASE("svg requires two axes") {
    auto p = maj3_partition(4);
    CHECK_THROWS_AS(render_projection_svg(p, AxisSubset({0})), std::invalid_argument);
}
