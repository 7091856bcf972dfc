#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "monotile/coloured_graph.hpp"
#include "monotile/errors.hpp"
#include "monotile/hypergraph_embedding.hpp"
#include "monotile/rng.hpp"
#include "monotile/sequence.hpp"

using namespace monotile;

namespace {

// Host with U = [0, nu) and V = [nu, nu + nv); edges of `colour` flipped away
// with probability q to create bad delta-sets.
struct Host {
    ColouredCompleteGraph g;
    VertexSet u, v;
};

Host make_host(int nu, int nv, double q, std::uint64_t seed) {
    int n = nu + nv;
    SplitRng rng(seed);
    std::vector<int> colours(static_cast<std::size_t>(n) * (n - 1) / 2, 0);
    for (auto& c : colours)
        if (rng.unit() < q) c = 1;
    Host h{ColouredCompleteGraph(n, 2, colours), VertexSet(n), VertexSet(n)};
    for (int i = 0; i < nu; ++i) h.u.insert(i);
    for (int i = nu; i < n; ++i) h.v.insert(i);
    return h;
}

}  // namespace

TEST_CASE("down-closed edges match a brute-force common-neighbourhood recount") {
    Host h = make_host(10, 12, 0.35, 42);
    double threshold = 3.0;
    DownClosedHypergraph dch(h.g, h.u, h.v, 0, threshold, 2);

    double total = 0, bad = 0;
    for (int a = 0; a < 10; ++a)
        for (int b = a + 1; b < 10; ++b) {
            std::vector<int> s{a, b};
            bool expect =
                h.g.common_neighbourhood(s, 0, h.v).count() >= static_cast<int>(threshold);
            CHECK(dch.edge(s) == expect);
            ++total;
            if (!expect) ++bad;
            // Down-closedness: singleton subsets of an edge are edges.
            if (expect) {
                CHECK(dch.edge({a}));
                CHECK(dch.edge({b}));
            }
        }
    REQUIRE(dch.counts_exact());
    CHECK(dch.delta_stats().total == doctest::Approx(total));
    CHECK(dch.delta_stats().bad == doctest::Approx(bad));

    // bad_supersets of a singleton: non-edge pairs through it.
    for (int a = 0; a < 10; ++a) {
        double expect = 0;
        for (int b = 0; b < 10; ++b) {
            if (b == a) continue;
            std::vector<int> s{std::min(a, b), std::max(a, b)};
            if (!dch.edge(s)) ++expect;
        }
        CHECK(dch.bad_supersets({a}) == doctest::Approx(expect));
    }
}

TEST_CASE("rich set oracle agrees with its own allowance on brute counts") {
    Host h = make_host(9, 10, 0.3, 7);
    DownClosedHypergraph dch(h.g, h.u, h.v, 0, 2.0, 2);
    RichSetOracle oracle(dch, 0.3);
    for (int a = 0; a < 9; ++a) {
        auto c = oracle.classify({a});
        // allowance = lambda^(2-1) * C(9-1, 1) = 0.3 * 8.
        CHECK(c.allowance == doctest::Approx(0.3 * 8.0));
        CHECK(c.rich == (c.bad_supersets < c.allowance));
        CHECK(c.bad_supersets == doctest::Approx(dch.bad_supersets({a})));
    }
    // The empty set is rich iff the global census is: bad < lambda^2 * total.
    auto empty = oracle.classify({});
    CHECK(empty.rich == (dch.delta_stats().bad < 0.09 * dch.delta_stats().total));
}

TEST_CASE("greedy embedding maps every hyperedge onto an edge, injectively") {
    Host h = make_host(14, 14, 0.0, 1);  // single colour: every pair is an edge
    DownClosedHypergraph dch(h.g, h.u, h.v, 0, 3.0, 2);
    DerivedMultiHypergraph hg = derive_hypergraph(member(SequenceSpec::parse("path"), 9));
    REQUIRE(hg.m == 5);

    HEmbedResult res = embed_hypergraph(hg, dch, 0.2, 99);
    REQUIRE(res.ok);
    REQUIRE(res.map.size() == 5);
    std::vector<int> sorted = res.map;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    for (const auto& e : hg.edges) {
        std::vector<int> image;
        for (int x : e) image.push_back(res.map[static_cast<std::size_t>(x)]);
        std::sort(image.begin(), image.end());
        image.erase(std::unique(image.begin(), image.end()), image.end());
        CHECK(dch.edge(image));
    }
    CHECK(res.rich_queries > 0);

    CHECK_THROWS_AS(embed_hypergraph(hg, dch, 0.6, 99), PreconditionError);  // lambda >= 1/(2D)
}

TEST_CASE("count_edges_in recounts hyperedge images") {
    DerivedMultiHypergraph hg = derive_hypergraph(member(SequenceSpec::parse("path"), 7));
    // Map H vertices 0..3 to hosts 2,4,6,8.
    std::vector<int> map{2, 4, 6, 8};
    VertexSet all = VertexSet::of(10, {2, 4, 6, 8});
    CHECK(count_edges_in(hg, map, all) == 3);
    CHECK(count_edges_in(hg, map, VertexSet::of(10, {2, 4})) == 1);   // only {0,1}
    CHECK(count_edges_in(hg, map, VertexSet(10)) == 0);
    DerivedMultiHypergraph hm = derive_hypergraph(member(SequenceSpec::parse("matching"), 4));
    std::vector<int> map2{1, 3};
    CHECK(count_edges_in(hm, map2, VertexSet::of(10, {1})) == 1);
}

TEST_CASE("embed_carefully satisfies every constraint or reports the starved one") {
    // n >= 16 r m = 128 hosts for the m = 4 path-derived hypergraph
    Host h = make_host(128, 64, 0.0, 3);
    DownClosedHypergraph dch(h.g, h.u, h.v, 0, 3.0, 2);
    DerivedMultiHypergraph hg = derive_hypergraph(member(SequenceSpec::parse("path"), 7));

    VertexSet trimmed = h.u;
    for (int x : {0, 1, 2, 3}) trimmed.erase(x);
    std::vector<VertexSet> constraints{h.u, trimmed};
    CarefulEmbedResult res = embed_carefully(hg, dch, 0.2, 2, constraints, 5);
    REQUIRE(res.map.size() == 4);
    REQUIRE(res.constraint_counts.size() == 2);
    CHECK(res.demand == doctest::Approx(3.0 / (4.0 * std::pow(64.0, 2))));
    for (std::size_t i = 0; i < constraints.size(); ++i) {
        CHECK(res.constraint_counts[i] == count_edges_in(hg, res.map, constraints[i]));
        CHECK(static_cast<double>(res.constraint_counts[i]) >= res.demand);
    }

    // An empty constraint can never reach the demand: retries must exhaust.
    // (It also fails the |R_i| precondition, so that check is bypassed here.)
    std::vector<VertexSet> impossible{VertexSet(192)};
    CHECK_THROWS_AS(embed_carefully(hg, dch, 0.2, 2, impossible, 5, 4, false), RetryExhausted);

    // Best effort keeps the attempt satisfying the most constraints and
    // reports the starved ones honestly instead of throwing.
    std::vector<VertexSet> mixed{h.u, VertexSet(192)};
    CarefulEmbedResult be = embed_carefully(hg, dch, 0.2, 2, mixed, 5, 4, false, true);
    REQUIRE(be.constraint_counts.size() == 2);
    CHECK(be.satisfied == 1);
    CHECK(be.constraint_counts[0] == hg.edge_count());
    CHECK(be.constraint_counts[1] == 0);
}
