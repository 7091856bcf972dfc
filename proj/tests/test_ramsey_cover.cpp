#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "monotile/coloured_graph.hpp"
#include "monotile/errors.hpp"
#include "monotile/ramsey_cover.hpp"
#include "monotile/rng.hpp"
#include "monotile/sequence.hpp"
#include "monotile/tiling.hpp"

using namespace monotile;

TEST_CASE("threshold arithmetic, independently recomputed") {
    // 32 * 1 * 2^1 * k and 64 * 1 * 2 * (ln 400 + 2) worked out by hand.
    CHECK(mono_member_threshold(1, 2, 1) == doctest::Approx(64.0));
    CHECK(mono_member_threshold(2, 2, 3) == doctest::Approx(768.0));
    CHECK(mono_member_threshold(3, 3, 1) == doctest::Approx(2592.0));
    CHECK(density_member_threshold(2, 0.5, 2) == doctest::Approx(512.0));
    CHECK(greedy_cover_bound(1, 2, 400.0, 1.0) ==
          doctest::Approx(1022.9074620298218).epsilon(1e-12));
    CHECK(greedy_cover_bound(2, 3, 1000.0, 10.0) ==
          doctest::Approx(7609.1560542582816).epsilon(1e-12));
    // s <= t clamps the log to zero: 64 * Delta * r^Delta * 2.
    CHECK(greedy_cover_bound(1, 2, 5.0, 10.0) == doctest::Approx(256.0));
}

TEST_CASE("backtracking embedder lands inside the exhaustive P_3 list of K_6") {
    ColouredCompleteGraph g = ColouredCompleteGraph::uniform_random(6, 2, 77);
    SequenceSpec spec = SequenceSpec::parse("path");

    // Every monochromatic P_3 of colour 0, by brute force over ordered triples.
    std::set<std::vector<int>> all;
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b)
            for (int c = 0; c < 6; ++c) {
                if (a == b || b == c || a == c) continue;
                if (g.colour_of(a, b) == 0 && g.colour_of(b, c) == 0) all.insert({a, b, c});
            }
    REQUIRE(!all.empty());

    auto emb = embed_member_backtracking(g, VertexSet::full(6), spec, 3, 0, 100000);
    REQUIRE(emb.has_value());
    CHECK(verify_embedding(g, spec, *emb).pass);
    CHECK(all.count(emb->vertices) == 1);

    // Restricting `within` to a vertex set with no such path must fail cleanly.
    std::set<int> touched;
    bool found_empty = false;
    for (int a = 0; a < 6 && !found_empty; ++a)
        for (int b = a + 1; b < 6 && !found_empty; ++b)
            for (int c = b + 1; c < 6 && !found_empty; ++c) {
                VertexSet sub = VertexSet::of(6, {a, b, c});
                bool any = false;
                for (const auto& t : all)
                    if (sub.contains(t[0]) && sub.contains(t[1]) && sub.contains(t[2])) any = true;
                if (!any) {
                    CHECK(!embed_member_backtracking(g, sub, spec, 3, 0, 100000).has_value());
                    found_empty = true;
                }
            }
}

TEST_CASE("find_mono_copy returns verified embeddings across strategies") {
    SequenceSpec path = SequenceSpec::parse("path");

    ColouredCompleteGraph red = ColouredCompleteGraph::single_colour(20, 2, 0);
    auto res = find_mono_copy(red, VertexSet::full(20), path, 12, 5);
    REQUIRE(res.has_value());
    CHECK(res->embedding.colour == 0);
    CHECK(verify_embedding(red, path, res->embedding).pass);

    ColouredCompleteGraph g = ColouredCompleteGraph::uniform_random(64, 2, 123);
    for (int k : {1, 2, 5, 16}) {
        auto r2 = find_mono_copy(g, VertexSet::full(64), path, k, 9 + k);
        REQUIRE(r2.has_value());
        CHECK(r2->embedding.order == k);
        CHECK(verify_embedding(g, path, r2->embedding).pass);
    }

    // Inside a 3-vertex window with no mono P_3, the search must fail, not lie.
    ColouredCompleteGraph tiny(3, 2, {0, 1, 1});
    // 01 red; 02, 12 blue -> blue path 0-2-1 exists, so ask for the red one.
    auto none = embed_member_backtracking(tiny, VertexSet::full(3), path, 3, 0, 1000);
    CHECK(!none.has_value());
}

TEST_CASE("greedy_cover covers all but the target, disjointly, within its bound") {
    SplitRng rng(31);
    for (const char* text : {"path", "matching", "random:D=3"}) {
        SequenceSpec spec = SequenceSpec::parse(text);
        for (int trial = 0; trial < 4; ++trial) {
            int n = 40 + static_cast<int>(rng.below(160));
            int r = 2 + static_cast<int>(rng.below(2));
            int t = trial == 0 ? 1 : 1 + static_cast<int>(rng.below(6));
            ColouredCompleteGraph g =
                ColouredCompleteGraph::uniform_random(n, r, rng.next());
            GreedyCoverResult cov =
                greedy_cover(g, VertexSet::full(n), spec, t, rng.next());

            CHECK(static_cast<double>(cov.tiles.size()) <= cov.bound);
            if (t > 1)
                CHECK(cov.residual.count() < t);
            else
                CHECK(cov.residual.count() <= 1);

            VertexSet seen(n);
            for (const Embedding& e : cov.tiles) {
                REQUIRE(verify_embedding(g, spec, e).pass);
                for (int v : e.vertices) {
                    REQUIRE(!seen.contains(v));  // disjoint
                    seen.insert(v);
                }
            }
            CHECK((seen | cov.residual).count() == n);
            CHECK(!seen.intersects(cov.residual));
        }
    }
    ColouredCompleteGraph one = ColouredCompleteGraph::single_colour(1, 2);
    GreedyCoverResult cov1 = greedy_cover(one, VertexSet::full(1), SequenceSpec::parse("path"), 1, 0);
    CHECK(cov1.tiles.empty());
    CHECK(cov1.residual.count() == 1);
    CHECK_THROWS_AS(greedy_cover(one, VertexSet::full(1), SequenceSpec::parse("path"), 0, 0),
                    PreconditionError);
}
