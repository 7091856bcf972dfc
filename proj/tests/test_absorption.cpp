#include <doctest.h>

#include <algorithm>
#include <map>
#include <vector>

#include "monotile/absorption.hpp"
#include "monotile/coloured_graph.hpp"
#include "monotile/errors.hpp"
#include "monotile/sequence.hpp"
#include "monotile/tiling.hpp"

using namespace monotile;

namespace {

// A hand-built witness on an all-red host: F = member(path, 4) on hosts 0..3,
// one singleton part per Y vertex.
GoodSubgraphWitness hand_witness(const SequenceSpec& spec) {
    BipartiteMember m = member(spec, 4);
    GoodSubgraphWitness w;
    w.spec = spec;
    w.colour = 0;
    w.f.order = 4;
    w.f.colour = 0;
    w.f.vertices = {0, 1, 2, 3};  // member vertex i -> host i
    w.x_member = m.left;
    w.y_member = m.right;
    for (int y : m.right) w.parts.push_back({y});  // host id == member id here
    w.eta = 0.4;
    w.theta = good_theta(2, 2);
    return w;
}

}  // namespace

TEST_CASE("good_theta, hand-computed") {
    CHECK(good_theta(1, 2) == doctest::Approx(1.0 / 128.0).epsilon(1e-12));
    CHECK(good_theta(2, 2) == doctest::Approx(1.0 / 32768.0).epsilon(1e-12));
    CHECK(good_theta(1, 1) == doctest::Approx(1.0 / 64.0).epsilon(1e-12));
    CHECK_THROWS_AS(good_theta(0, 2), PreconditionError);
    CHECK_THROWS_AS(good_theta(1, 0), PreconditionError);
}

TEST_CASE("verify_good accepts the hand witness and rejects its mutations") {
    ColouredCompleteGraph g = ColouredCompleteGraph::single_colour(12, 2, 0);
    SequenceSpec spec = SequenceSpec::parse("path");
    GoodSubgraphWitness w = hand_witness(spec);
    REQUIRE(verify_good(g, w).pass);

    GoodSubgraphWitness overlap = w;
    overlap.parts = {{w.parts[0][0]}, {w.parts[0][0]}};
    CHECK(!verify_good(g, overlap).pass);

    GoodSubgraphWitness alien = w;
    alien.parts[1] = {7};  // not a Y host
    CHECK(!verify_good(g, alien).pass);

    GoodSubgraphWitness greedy_eta = w;
    greedy_eta.eta = 0.6;  // |Y_i| = 1 < 0.6 * |Y| = 1.2
    CHECK(!verify_good(g, greedy_eta).pass);

    GoodSubgraphWitness swapped = w;
    std::swap(swapped.x_member, swapped.y_member);
    CHECK(!verify_good(g, swapped).pass);

    GoodSubgraphWitness uncovered = w;
    uncovered.parts.pop_back();  // leaves theta|Y| << 1 vertex uncovered
    CHECK(!verify_good(g, uncovered).pass);
}

TEST_CASE("switch relation is the cached subset test") {
    ColouredCompleteGraph g = ColouredCompleteGraph::single_colour(12, 2, 0);
    SequenceSpec spec = SequenceSpec::parse("path");
    GoodSubgraphWitness w = hand_witness(spec);
    SwitchRelation rel = SwitchRelation::from_witness(g, w);
    CHECK(rel.colour() == 0);

    // Y host 1 carries member vertex 1 with neighbours {0, 2} -> hosts {0, 2}.
    CHECK(rel.nf(1).to_vector() == std::vector<int>{0, 2});
    CHECK(rel.related(1, 5));
    CHECK(!rel.related(1, 0));  // 0 is not red-adjacent to itself
    CHECK(rel.related(3, 0));   // nf(3) = {2}, and 2 ~red 0
    CHECK_THROWS_AS(rel.related(5, 0), PreconditionError);  // unknown y

    // On a blue host nothing is red-related.
    ColouredCompleteGraph blue = ColouredCompleteGraph::single_colour(12, 2, 1);
    SwitchRelation rel_blue = SwitchRelation::from_witness(blue, w);
    CHECK(!rel_blue.related(1, 5));
}

TEST_CASE("disjoint chain packing is greedy over the pool") {
    ColouredCompleteGraph g = ColouredCompleteGraph::single_colour(10, 2, 0);
    std::map<int, VertexSet> nf;
    for (int i = 0; i < 6; ++i) nf[i] = VertexSet::of(10, {9});
    SwitchRelation rel(g, 0, nf);

    std::vector<int> pool{2, 3, 4, 5};
    std::vector<std::pair<int, int>> pairs;
    CHECK(count_disjoint_chains(rel, pool, 0, 1, nullptr, &pairs) == 2);
    CHECK(pairs.size() == 2);
    for (auto [z, zw] : pairs) {
        CHECK(z != zw);
        for (auto [z2, w2] : pairs)
            if (z != z2) CHECK((z != z2 && z != w2 && zw != z2 && zw != w2));
    }

    VertexSet excl = VertexSet::of(10, {4});
    CHECK(count_disjoint_chains(rel, pool, 0, 1, &excl) == 1);
    // x and y are never usable as chain vertices.
    CHECK(count_disjoint_chains(rel, {0, 1, 2}, 0, 1) == 0);
}

TEST_CASE("switch_matching covers Z and can pull a vertex into the copy") {
    int n = 700;
    ColouredCompleteGraph g = ColouredCompleteGraph::single_colour(n, 2, 0);
    SequenceSpec spec = SequenceSpec::parse("path");
    std::map<int, VertexSet> nf;
    std::vector<int> y;
    for (int i = 100; i < 400; ++i) {
        nf[i] = VertexSet::of(n, {0, 1});
        y.push_back(i);
    }
    SwitchRelation rel(g, 0, nf);

    VertexSet z(n);
    z.insert(600);
    SwitchOutcome out = switch_matching(g, spec, rel, y, z, 1.0, 0.5, 77);
    CHECK(out.t_cap == 1);
    CHECK((out.absorbed | out.leftover).is_subset_of(z));
    CHECK(!out.absorbed.intersects(out.leftover));

    VertexSet covered(n);
    for (const Embedding& e : out.tiles) {
        REQUIRE(verify_embedding(g, spec, e).pass);
        for (int v : e.vertices) {
            REQUIRE(!covered.contains(v));
            covered.insert(v);
        }
    }
    CHECK((z - out.absorbed).is_subset_of(covered));
    // Whatever else is covered must be the freed member copy inside Y.
    VertexSet extra = covered - (z - out.absorbed);
    CHECK(extra.count() == out.absorbed.count());
    for (int v : extra.to_vector()) CHECK(std::find(y.begin(), y.end(), v) != y.end());
    CHECK(out.absorbed.count() == 1);  // the single Z vertex joined the copy
    bool moved_in = false;
    for (const auto& [from, to] : out.role_moves) {
        (void)from;
        if (to == 600) moved_in = true;
    }
    CHECK(moved_in);

    // Y and Z must be disjoint.
    VertexSet zbad(n);
    zbad.insert(y[0]);
    CHECK_THROWS_AS(switch_matching(g, spec, rel, y, zbad, 1.0, 0.5, 1), PreconditionError);
}

TEST_CASE("absorb tiles exactly X u Y u Z, singletons for the unabsorbable") {
    ColouredCompleteGraph g = ColouredCompleteGraph::single_colour(12, 2, 0);
    SequenceSpec spec = SequenceSpec::parse("path");
    GoodSubgraphWitness w = hand_witness(spec);

    VertexSet z = VertexSet::of(12, {6, 7, 8});
    AbsorbResult res = absorb(g, w, z, 9);
    VertexSet target = w.host_set(12) | z;
    CHECK(verify_tiling_over(g, spec, res.tiling, target).pass);
    CHECK(res.leftover.is_subset_of(z));
    CHECK(res.part_assignment.size() == 3);
    CHECK(verify_embedding(g, spec, res.new_f).pass);

    // Z overlapping the copy itself: the overlap is already covered by F.
    VertexSet z2 = VertexSet::of(12, {1, 6});
    AbsorbResult res2 = absorb(g, w, z2, 10);
    CHECK(verify_tiling_over(g, spec, res2.tiling, w.host_set(12) | z2).pass);
    CHECK(res2.part_assignment.size() == 1);

    AbsorbResult res3 = absorb(g, w, VertexSet(12), 11);
    CHECK(verify_tiling_over(g, spec, res3.tiling, w.host_set(12)).pass);
    CHECK(res3.tiling.tiles.size() == 1);  // just F
}

TEST_CASE("switching sets on a complete bipartite incidence graph") {
    BipartiteGraph h(8, 40);
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 40; ++b) h.add_edge(a, b);

    auto one = find_one_good_set(h, 0.4);
    REQUIRE(one.has_value());
    CHECK(!one->s.empty());
    CHECK(one->f.size() == one->s.size());
    CHECK(one->met_target);
    CHECK(one->c_chain >= one->c_target);
    std::vector<int> fs = one->f;
    std::sort(fs.begin(), fs.end());
    CHECK(std::adjacent_find(fs.begin(), fs.end()) == fs.end());  // injective

    ManyGoodSets many = find_many_good_sets(h, 0.4, 0.1);
    CHECK(!many.sets.empty());
    CHECK(many.residual_fraction <= 0.1 + 1e-9);
    REQUIRE(many.f.size() == 8);
    std::vector<int> fall = many.f;
    std::sort(fall.begin(), fall.end());
    CHECK(std::adjacent_find(fall.begin(), fall.end()) == fall.end());
    for (int a = 0; a < 8; ++a) CHECK(h.row(a).contains(many.f[static_cast<std::size_t>(a)]));
}

TEST_CASE("find_good_subgraph on an all-red host yields a verified witness that absorbs") {
    ColouredCompleteGraph g = ColouredCompleteGraph::single_colour(800, 2, 0);
    SequenceSpec spec = SequenceSpec::parse("path");
    VertexSet u(800), v(800);
    std::vector<int> w;
    for (int i = 0; i < 512; ++i) u.insert(i);
    for (int i = 512; i < 768; ++i) v.insert(i);
    for (int i = 768; i < 800; ++i) w.push_back(i);

    FindGoodOptions opts;
    opts.seed = 13;
    GoodSubgraphOutcome out = find_good_subgraph(g, spec, u, v, w, 0, 0.3, opts);
    CHECK(out.member_order == 8);  // 512 / (16 r^2)
    CHECK(verify_good(g, out.witness).pass);
    REQUIRE(out.w_counts.size() == w.size());
    for (auto c : out.w_counts) CHECK(static_cast<double>(c) >= out.w_demand);

    VertexSet z = VertexSet::of(800, {770, 771, 772, 773});
    AbsorbResult ab = absorb(g, out.witness, z, 21);
    CHECK(verify_tiling_over(g, spec, ab.tiling, out.witness.host_set(800) | z).pass);

    // Asking for red structure on an all-blue host must fail loudly.
    ColouredCompleteGraph blue = ColouredCompleteGraph::single_colour(800, 2, 1);
    CHECK_THROWS_AS(find_good_subgraph(blue, spec, u, v, w, 0, 0.3, opts), std::runtime_error);
}
