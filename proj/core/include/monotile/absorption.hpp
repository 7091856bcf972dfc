#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "monotile/bipartite_graph.hpp"
#include "monotile/coloured_graph.hpp"
#include "monotile/sequence.hpp"
#include "monotile/tiling.hpp"
#include "monotile/vertex_set.hpp"

namespace monotile {

// theta used by every good subgraph: 1 / (2 delta^2 (32 r)^delta).
double good_theta(int delta, int r);

// Witness of an (eta, theta)-good subgraph: a monochromatic member copy F
// with sides X, Y and disjoint subsets Y_1..Y_t of Y such that |Y_i| >= eta|Y|,
// |Y \ U Y_i| <= theta|Y|, and within each Y_i every ordered vertex pair has
// eta|Y_i| pairwise disjoint switching chains.  eta/theta are the *achieved*
// values (verified, possibly 0 on hostile hosts).
struct GoodSubgraphWitness {
    SequenceSpec spec;
    int colour = 0;
    Embedding f;                          // the member copy F
    std::vector<int> x_member;            // member vertex ids forming X
    std::vector<int> y_member;            // member vertex ids forming Y
    std::vector<std::vector<int>> parts;  // Y_i as host vertex lists
    double eta = 0.0;
    double theta = 0.0;

    std::vector<int> x_hosts() const;
    std::vector<int> y_hosts() const;
    VertexSet host_set(int n) const; // X u Y
};

// u ~ v  <=>  N_F(u) subseteq N_colour(v).  N_F per Y-host is cached as a
// bitset, so each query is one subset test.
class SwitchRelation {
public:
    SwitchRelation(const ColouredCompleteGraph& g, int colour,
                   std::map<int, VertexSet> nf);
    static SwitchRelation from_witness(const ColouredCompleteGraph& g,
                                       const GoodSubgraphWitness& w);

    bool related(int y_host, int v_host) const;
    const VertexSet& nf(int y_host) const;
    int colour() const { return colour_; }

private:
    const ColouredCompleteGraph* g_;
    int colour_;
    std::map<int, VertexSet> nf_;
};

// Greedy packing of pairwise disjoint chain pairs (z, w) from `pool` with
// x ~ z, z ~ w, w ~ y; z, w avoid x, y, `exclude` and earlier pairs.  Returns
// the packed count; pairs are appended to `out` when given.
int count_disjoint_chains(const SwitchRelation& rel, const std::vector<int>& pool, int x,
                          int y, const VertexSet* exclude = nullptr,
                          std::vector<std::pair<int, int>>* out = nullptr);

struct VerifyGoodOptions {
    int pair_exact_cap = 64;  // all ordered pairs when |Y_i| <= cap
    int sampled_pairs = 200;  // otherwise this many seeded pairs
    std::uint64_t seed = 0;
};

// Checks the five goodness conditions against the witness's recorded
// eta/theta (condition 5 by greedy chain packing, sampled above the cap).
VerifyReport verify_good(const ColouredCompleteGraph& g, const GoodSubgraphWitness& w,
                         const VerifyGoodOptions& opts = {});

struct SwitchOutcome {
    std::map<int, int> role_moves;  // old role holder -> new holder (the map f)
    std::vector<Embedding> tiles;   // cover of Z \ T plus the member copy on R
    VertexSet absorbed;             // T: joined the F copy via role moves
    VertexSet leftover;             // Z vertices that fell back to singleton tiles
    int t_cap = 0;                  // floor(min(eta|Y|/100, theta|Y|, |Y|/(32 D r^D), |Z|))
};

// Switch lemma on one part.  Y and Z disjoint; rel must relate y ~ y (true for
// any monochromatic F).  Covers G[Z] greedily down to T with |T| <= t, matches
// T into Y through ~, frees a member copy R inside Y by chain switches, and
// reports the role moves.  Best effort: the tiles always cover all of
// Z \ absorbed; anything unabsorbable becomes a singleton tile (`leftover`).
SwitchOutcome switch_matching(const ColouredCompleteGraph& g, const SequenceSpec& spec,
                              const SwitchRelation& rel, const std::vector<int>& y,
                              const VertexSet& z, double eta, double theta,
                              std::uint64_t seed);

struct AbsorbResult {
    Tiling tiling;       // verified tiles covering exactly X u Y u Z, F included
    Embedding new_f;     // the rebuilt F copy (also present in tiling)
    VertexSet leftover;  // Z vertices not absorbed into F (covered by singletons)
    std::vector<int> part_assignment; // aligned with ascending Z \ (X u Y); -1 = none
};

// Good-partition-absorbs: split Z among the parts by the theta rule, switch
// each part, rebuild F from the accumulated role moves, and verify the result.
// The output always covers X u Y u Z exactly; anything unabsorbable becomes a
// singleton tile and is listed in `leftover`.
AbsorbResult absorb(const ColouredCompleteGraph& g, const GoodSubgraphWitness& w,
                    const VertexSet& z, std::uint64_t seed);

struct GoodSetOptions {
    bool faithful_trim = false; // restrict A to floor(eps^13 |A| / 128) first
    int max_retries = 16;
    int pair_exact_cap = 48;    // exact chain verification cap on |S|
    int sampled_pairs = 150;
    int max_rounds = 64;        // peeling rounds in find_many_good_sets
    std::uint64_t seed = 0;
};

struct OneGoodSet {
    std::vector<int> s;     // A-side ids
    std::vector<int> f;     // matched B-side ids, aligned with s
    double c_size = 0.0;    // |S| / |A|
    double c_chain = 0.0;   // min verified chains / |S|
    double c_target = 0.0;  // min(eps^4/8, eps^10/32)
    bool met_target = false;
    int retries = 0;
};

// One switching set S in a bipartite graph H = (A, B) with min degree
// eps|B| and |A| <= |B|: pair-DRC, co-degree filtering, a random partner map
// made injective, then verified chain packing.  Returns the best attempt.
std::optional<OneGoodSet> find_one_good_set(const BipartiteGraph& h, double eps,
                                            const GoodSetOptions& opts = {});

struct ManyGoodSets {
    std::vector<std::vector<int>> sets; // S_i (A ids)
    std::vector<int> f;                 // injective f[a] in B, f(a) in N(a)
    double eta = 0.0;                   // achieved min(|S_i|/|A|, chain ratios)
    double eta_target = 0.0;            // theta * c_target(eps/2)
    double residual_fraction = 0.0;     // |A \ U S_i| / |A| (goal: <= theta)
    int rounds = 0;
};

// Peels switching sets until at most theta|A| of A is uncovered, then extends
// f injectively over the rest.  Needs |A| <= (eps/2)|B| and min degree eps|B|.
ManyGoodSets find_many_good_sets(const BipartiteGraph& h, double eps, double theta,
                                 const GoodSetOptions& opts = {});

struct FindGoodOptions {
    std::uint64_t seed = 0;
    bool practical_gates = true;  // desk-scale size gates; eps formulas unchanged
    double lambda = 0.0;          // 0: use 1/(4 delta)
    std::uint64_t census_cap = 1'000'000;
    int embed_retries = 64;
    bool verify = true;
    GoodSetOptions good_sets;
};

struct GoodSubgraphOutcome {
    GoodSubgraphWitness witness;
    std::vector<std::int64_t> w_counts; // per w: #{y in Y : N_F(y) in N_red(w)}
    double w_demand = 0.0;              // 2 theta |Y|
    int member_order = 0;               // k
};

// Find-good-subgraph: member order k = |U|/(16 r^2), its hypergraph embedded
// carefully into the down-closed hypergraph on U (edges: >= eps|V| common
// `colour` neighbours in V) with constraints N_colour(w) n U, then switching
// sets on the (hyperedges x V) incidence graph.  Throws StageError when a
// stage cannot deliver; callers degrade to greedy covering.
GoodSubgraphOutcome find_good_subgraph(const ColouredCompleteGraph& g, const SequenceSpec& spec,
                                       const VertexSet& u, const VertexSet& v,
                                       const std::vector<int>& w, int colour, double eps,
                                       const FindGoodOptions& opts = {});

} // namespace monotile
