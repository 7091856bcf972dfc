#include <doctest.h>

#include <numeric>
#include <vector>

#include "monotile/coloured_graph.hpp"
#include "monotile/errors.hpp"
#include "monotile/rng.hpp"
#include "monotile/vertex_set.hpp"

using namespace monotile;

TEST_CASE("pair index is the row-major upper triangle") {
    int n = 9;
    ColouredCompleteGraph g = ColouredCompleteGraph::single_colour(n, 2);
    std::size_t expect = 0;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) CHECK(g.pair_index(u, v) == expect++);
    CHECK(expect == g.colour_data().size());
}

TEST_CASE("colouring accessors agree with a brute-force recount") {
    ColouredCompleteGraph g = ColouredCompleteGraph::uniform_random(40, 3, 2024);
    REQUIRE(g.n() == 40);
    REQUIRE(g.r() == 3);

    for (int u = 0; u < g.n(); ++u)
        for (int v = 0; v < g.n(); ++v) {
            if (u == v) continue;
            int c = g.colour_of(u, v);
            REQUIRE(c >= 0);
            REQUIRE(c < 3);
            CHECK(c == g.colour_of(v, u));
            CHECK(g.neighbours(c, u).contains(v));
            for (int other = 0; other < 3; ++other)
                if (other != c) CHECK(!g.neighbours(other, u).contains(v));
        }

    VertexSet within = VertexSet::of(40, {0, 1, 2, 3, 4, 5, 6, 7, 20, 21, 22, 33});
    std::vector<std::int64_t> hist = g.colour_histogram(within);
    std::vector<std::int64_t> brute(3, 0);
    auto vs = within.to_vector();
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j) ++brute[g.colour_of(vs[i], vs[j])];
    CHECK(hist == brute);
    CHECK(std::accumulate(hist.begin(), hist.end(), std::int64_t{0}) ==
          static_cast<std::int64_t>(vs.size() * (vs.size() - 1) / 2));
}

TEST_CASE("common neighbourhood excludes the sources and matches brute force") {
    ColouredCompleteGraph g = ColouredCompleteGraph::uniform_random(30, 2, 7);
    VertexSet within = VertexSet::full(30);
    SplitRng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<int> s = rng.sample_without_replacement(30, 1 + static_cast<int>(rng.below(3)));
        int colour = static_cast<int>(rng.below(2));
        VertexSet got = g.common_neighbourhood(s, colour, within);
        for (int v = 0; v < 30; ++v) {
            bool in_s = std::find(s.begin(), s.end(), v) != s.end();
            bool expect = !in_s;
            if (expect)
                for (int u : s) expect = expect && g.colour_of(u, v) == colour;
            CHECK(got.contains(v) == expect);
        }
    }
    // Empty source set: everything in `within` qualifies.
    CHECK(g.common_neighbourhood(std::vector<int>{}, 0, within).count() == 30);
}

TEST_CASE("factories and digest") {
    ColouredCompleteGraph red = ColouredCompleteGraph::single_colour(6, 3, 1);
    CHECK(red.is_single_colour());
    for (int u = 0; u < 6; ++u)
        for (int v = u + 1; v < 6; ++v) CHECK(red.colour_of(u, v) == 1);

    // blocks: colour_matrix[i][j] colours edges between part i and part j.
    std::vector<int> parts{3, 3};
    std::vector<std::vector<int>> mat{{0, 1}, {1, 0}};
    ColouredCompleteGraph b = ColouredCompleteGraph::blocks(parts, 2, mat);
    REQUIRE(b.n() == 6);
    CHECK(b.colour_of(0, 1) == 0);
    CHECK(b.colour_of(0, 3) == 1);
    CHECK(b.colour_of(3, 5) == 0);

    ColouredCompleteGraph g1 = ColouredCompleteGraph::uniform_random(12, 2, 9);
    ColouredCompleteGraph g2 = ColouredCompleteGraph::uniform_random(12, 2, 9);
    ColouredCompleteGraph g3 = ColouredCompleteGraph::uniform_random(12, 2, 10);
    CHECK(g1.digest() == g2.digest());
    CHECK(g1.digest() != g3.digest());

    std::vector<int> cols(g1.colour_data().begin(), g1.colour_data().end());
    cols[5] ^= 1;
    ColouredCompleteGraph flipped(12, 2, cols);
    CHECK(flipped.digest() != g1.digest());

    CHECK_THROWS_AS(ColouredCompleteGraph(3, 2, {0, 1}), PreconditionError);
    CHECK_THROWS_AS(ColouredCompleteGraph(3, 2, {0, 1, 2}), PreconditionError);
}
