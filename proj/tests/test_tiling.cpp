#include <doctest.h>

#include <vector>

#include "monotile/coloured_graph.hpp"
#include "monotile/sequence.hpp"
#include "monotile/tiling.hpp"

using namespace monotile;

namespace {

Embedding emb(int order, int colour, std::vector<int> vs) {
    Embedding e;
    e.order = order;
    e.colour = colour;
    e.vertices = std::move(vs);
    return e;
}

}  // namespace

TEST_CASE("verify_embedding accepts a genuine monochromatic member copy") {
    ColouredCompleteGraph g = ColouredCompleteGraph::single_colour(6, 2, 0);
    SequenceSpec spec = SequenceSpec::parse("path");

    CHECK(verify_embedding(g, spec, emb(3, 0, {4, 1, 5})).pass);
    // Singletons may carry the sentinel colour or a real one.
    CHECK(verify_embedding(g, spec, emb(1, kSingletonColour, {2})).pass);
    CHECK(verify_embedding(g, spec, emb(1, 0, {2})).pass);
}

TEST_CASE("verify_embedding rejects broken copies") {
    ColouredCompleteGraph g = ColouredCompleteGraph::uniform_random(8, 2, 3);
    SequenceSpec spec = SequenceSpec::parse("path");

    // Find one red edge and one blue edge to build a miscoloured P_3.
    int ru = -1, rv = -1, bu = -1, bv = -1;
    for (int u = 0; u < 8; ++u)
        for (int v = u + 1; v < 8; ++v) {
            if (g.colour_of(u, v) == 0 && ru < 0) ru = u, rv = v;
            if (g.colour_of(u, v) == 1 && bu < 0) bu = u, bv = v;
        }
    REQUIRE(ru >= 0);
    REQUIRE(bu >= 0);

    VerifyReport wrong_colour = verify_embedding(g, spec, emb(2, 1, {ru, rv}));
    CHECK(!wrong_colour.pass);
    CHECK(!wrong_colour.violations.empty());

    CHECK(!verify_embedding(g, spec, emb(3, 0, {ru, rv, rv})).pass);  // repeated host
    CHECK(!verify_embedding(g, spec, emb(3, 0, {ru, rv})).pass);      // order mismatch
    CHECK(!verify_embedding(g, spec, emb(2, 3, {ru, rv})).pass);      // colour out of range
    CHECK(!verify_embedding(g, spec, emb(2, 0, {ru, 8})).pass);       // vertex out of range
}

TEST_CASE("verify_tiling demands a partition into verified tiles") {
    ColouredCompleteGraph g = ColouredCompleteGraph::single_colour(5, 2, 1);
    SequenceSpec spec = SequenceSpec::parse("path");

    Tiling t;
    t.n = 5;
    t.spec = spec;
    t.tiles.push_back(emb(3, 1, {0, 1, 2}));
    t.tiles.push_back(emb(2, 1, {3, 4}));
    CHECK(verify_tiling(g, spec, t).pass);

    Tiling missing = t;
    missing.tiles.pop_back();
    CHECK(!verify_tiling(g, spec, missing).pass);

    Tiling overlap = t;
    overlap.tiles[1] = emb(2, 1, {2, 3});
    CHECK(!verify_tiling(g, spec, overlap).pass);

    Tiling bad_member = t;
    bad_member.tiles[0] = emb(3, 0, {0, 1, 2});  // colour 0 edges do not exist
    CHECK(!verify_tiling(g, spec, bad_member).pass);
}

TEST_CASE("verify_tiling_over checks an arbitrary target set") {
    ColouredCompleteGraph g = ColouredCompleteGraph::single_colour(7, 2, 0);
    SequenceSpec spec = SequenceSpec::parse("path");
    VertexSet target = VertexSet::of(7, {1, 2, 3, 6});

    Tiling t;
    t.n = 7;
    t.spec = spec;
    t.cover_only = true;
    t.tiles.push_back(emb(3, 0, {1, 2, 3}));
    t.tiles.push_back(emb(1, kSingletonColour, {6}));
    CHECK(verify_tiling_over(g, spec, t, target).pass);

    // Covering a vertex outside the target is a violation, as is missing one.
    Tiling extra = t;
    extra.tiles.push_back(emb(1, kSingletonColour, {0}));
    CHECK(!verify_tiling_over(g, spec, extra, target).pass);
    Tiling shy = t;
    shy.tiles.pop_back();
    CHECK(!verify_tiling_over(g, spec, shy, target).pass);
}
