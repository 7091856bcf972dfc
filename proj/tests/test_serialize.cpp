#include <doctest.h>

#include <string>

#include "monotile/coloured_graph.hpp"
#include "monotile/errors.hpp"
#include "monotile/pipeline.hpp"
#include "monotile/serialize.hpp"
#include "monotile/tiling.hpp"

using namespace monotile;

TEST_CASE("graph text round-trip is the identity") {
    for (int n : {1, 2, 7, 23}) {
        ColouredCompleteGraph g = ColouredCompleteGraph::uniform_random(n, 3, 17 + n);
        ColouredCompleteGraph back = graph_from_text(graph_to_text(g));
        REQUIRE(back.n() == g.n());
        REQUIRE(back.r() == g.r());
        CHECK(back.digest() == g.digest());
        CHECK(graph_to_text(back) == graph_to_text(g));
    }
}

TEST_CASE("graph text format is the documented upper-triangle layout") {
    // K_3 with colours 01=2, 02=0, 12=1 in row-major upper-triangle order.
    ColouredCompleteGraph g(3, 3, {2, 0, 1});
    CHECK(graph_to_text(g) == "3 3\n2 0\n1\n");
    ColouredCompleteGraph back = graph_from_text("3 3  2 0 1");
    CHECK(back.colour_of(0, 1) == 2);
    CHECK(back.colour_of(0, 2) == 0);
    CHECK(back.colour_of(1, 2) == 1);
}

TEST_CASE("graph text parse errors") {
    CHECK_THROWS_AS(graph_from_text(""), ParseError);
    CHECK_THROWS_AS(graph_from_text("3"), ParseError);
    CHECK_THROWS_AS(graph_from_text("3 2\n0 1"), ParseError);        // missing colour
    CHECK_THROWS_AS(graph_from_text("3 2\n0 1 0 1"), ParseError);    // trailing token
    CHECK_THROWS_AS(graph_from_text("3 2\n0 2 0"), ParseError);      // colour >= r
    CHECK_THROWS_AS(graph_from_text("3 2\n0 x 0"), ParseError);      // junk
    CHECK_THROWS_AS(graph_from_text("3 0\n"), ParseError);           // bad r
}

TEST_CASE("graph JSON mirror round-trips") {
    ColouredCompleteGraph g = ColouredCompleteGraph::uniform_random(9, 2, 4);
    std::string json = graph_to_json(g);
    ColouredCompleteGraph back = graph_from_json(json);
    CHECK(back.digest() == g.digest());

    CHECK_THROWS_AS(graph_from_json("{"), ParseError);
    CHECK_THROWS_AS(graph_from_json("{\"n\":3,\"r\":2}"), ParseError);
    CHECK_THROWS_AS(graph_from_json("{\"n\":3,\"r\":2,\"colours\":[0,1]}"), ParseError);
    CHECK_THROWS_AS(graph_from_json("{\"n\":3,\"r\":2,\"colours\":[0,1,5]}"), ParseError);
}

TEST_CASE("tiling JSON round-trips and rejects corruption") {
    ColouredCompleteGraph g = ColouredCompleteGraph::uniform_random(24, 2, 11);
    SequenceSpec spec = SequenceSpec::parse("path");
    PipelineParams params;
    params.seed = 3;
    TileResult res = tile(g, spec, params);
    REQUIRE(verify_tiling(g, spec, res.tiling).pass);

    std::string json = tiling_to_json(g.r(), res);
    ParsedTiling back = tiling_from_json(json);
    CHECK(back.tiling.n == 24);
    CHECK(back.r == 2);
    CHECK(back.metrics_size == res.metrics.size);
    CHECK(back.tiling.spec.to_string() == spec.to_string());
    REQUIRE(back.tiling.tiles.size() == res.tiling.tiles.size());
    CHECK(verify_tiling(g, back.tiling.spec, back.tiling).pass);

    // Same seed, fresh run: byte-identical artifact.
    CHECK(tiling_to_json(g.r(), tile(g, spec, params)) == json);

    CHECK_THROWS_AS(tiling_from_json("{}"), ParseError);
    std::string bad_vertex = json;
    // Out-of-range vertex id in place of a valid one.
    std::size_t pos = bad_vertex.find("\"vertices\": [");
    REQUIRE(pos != std::string::npos);
    bad_vertex.replace(pos, 13, "\"vertices\": [99,");
    CHECK_THROWS_AS(tiling_from_json(bad_vertex), ParseError);
}

TEST_CASE("hex digest formatting") {
    CHECK(hex_digest(0) == "0000000000000000");
    CHECK(hex_digest(255) == "00000000000000ff");
    CHECK(hex_digest(0xDEADBEEFCAFEF00DULL) == "deadbeefcafef00d");
}
