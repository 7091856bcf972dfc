#include <doctest.h>

#include <cmath>
#include <vector>

#include "monotile/bipartite_graph.hpp"
#include "monotile/drc.hpp"
#include "monotile/errors.hpp"
#include "monotile/rng.hpp"

using namespace monotile;

namespace {

BipartiteGraph random_bipartite(int na, int nb, double p, std::uint64_t seed) {
    BipartiteGraph h(na, nb);
    SplitRng rng(seed);
    for (int a = 0; a < na; ++a)
        for (int b = 0; b < nb; ++b)
            if (rng.unit() < p) h.add_edge(a, b);
    return h;
}

// Independent recount of unordered bad k-subsets of S (k = 2 here).
std::uint64_t brute_bad_pairs(const BipartiteGraph& h, const VertexSet& s, double gamma,
                              int nb) {
    std::vector<int> vs = s.to_vector();
    std::uint64_t bad = 0;
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j)
            if (h.row(vs[i]).intersection_count(h.row(vs[j])) <
                gamma * static_cast<double>(nb))
                ++bad;
    return bad;
}

}  // namespace

TEST_CASE("chernoff lower tail, hand-computed values and domain checks") {
    CHECK(chernoff_lower_tail(5.0, 0.5) == doctest::Approx(0.5352614285189903).epsilon(1e-12));
    CHECK(chernoff_lower_tail(10.0, 0.2) == doctest::Approx(0.8187307530779818).epsilon(1e-12));
    CHECK(chernoff_lower_tail(50.0, 0.8) == doctest::Approx(std::exp(-16.0)).epsilon(1e-12));
    CHECK_THROWS_AS(chernoff_lower_tail(-1.0, 0.5), PreconditionError);
    CHECK_THROWS_AS(chernoff_lower_tail(5.0, 1.5), PreconditionError);
}

TEST_CASE("dependent_random_choice delivers both verified bounds") {
    DrcParams p;
    p.k = 2;
    p.t = 3;
    p.epsilon = 0.5;
    p.delta = 0.3;
    p.gamma = 0.1;  // delta * eps^(kt) = 0.0046875 >= 2 * gamma^t = 0.002
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL}) {
        BipartiteGraph h = random_bipartite(40, 50, 0.62, 900 + seed);
        p.seed = seed;
        DrcResult res = dependent_random_choice(h, p);
        CHECK(res.chosen_t == 3);
        CHECK(res.witness_t.size() == 3);
        CHECK(static_cast<double>(res.s.count()) >= res.size_bound);
        CHECK(res.size_bound == doctest::Approx(0.5 * std::pow(0.5, 3) * 40.0));
        std::uint64_t brute = brute_bad_pairs(h, res.s, p.gamma, 50);
        CHECK(res.bad_k_sets == brute);
        CHECK(count_bad_k_sets(h, res.s, 2, p.gamma) == brute);
        CHECK(static_cast<double>(brute) <= res.bad_bound);
        CHECK(res.bad_bound ==
              doctest::Approx(0.3 * std::pow(static_cast<double>(res.s.count()), 2)));
    }
}

TEST_CASE("k_set_drc picks the documented t window") {
    // Smallest t with 2^(t-2) <= 1/delta < 2^(t-1): delta = 1/4 gives t = 4.
    BipartiteGraph h = random_bipartite(60, 60, 0.6, 5);
    DrcResult res = k_set_drc(h, 2, 2, 0.25, 17);
    CHECK(res.chosen_t == 4);
    CHECK(static_cast<double>(res.s.count()) >= res.size_bound);
    CHECK(static_cast<double>(res.bad_k_sets) <= res.bad_bound);
    // gamma for colour classes is (1/r)^k / 2 = 1/8.
    CHECK(res.bad_k_sets == brute_bad_pairs(h, res.s, 0.125, 60));
    CHECK_THROWS_AS(k_set_drc(h, 2, 2, 0.6, 1), PreconditionError);  // delta >= 1/2
}

TEST_CASE("pair_drc contract on a dense host; hopeless hosts exhaust retries") {
    BipartiteGraph h = random_bipartite(50, 50, 0.62, 8);
    DrcResult res = pair_drc(h, 0.5, 0.2, 3);
    CHECK(res.chosen_t == 4);
    CHECK(static_cast<double>(res.s.count()) >= 0.5 * std::pow(0.5, 4) * 50.0);
    CHECK(res.bad_k_sets == brute_bad_pairs(h, res.s, std::pow(0.5, 3), 50));
    CHECK(static_cast<double>(res.bad_k_sets) <= res.bad_bound);

    CHECK_THROWS_AS(pair_drc(h, 0.5, 0.01, 3), PreconditionError);  // delta < 2 eps^4

    BipartiteGraph empty(30, 30);
    CHECK_THROWS_AS(pair_drc(empty, 0.5, 0.2, 3, 8, false), RetryExhausted);
    CHECK_THROWS_AS(pair_drc(empty, 0.5, 0.2, 3, 8, true), PreconditionError);
}
