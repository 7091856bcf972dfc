#pragma once

#include <cstdint>
#include <vector>

#include "monotile/bipartite_graph.hpp"
#include "monotile/vertex_set.hpp"

namespace monotile {

// P(X <= (1 - delta) * mu) <= exp(-mu * delta^2 / 2) for sums of independent
// [0,1] variables.  Pure arithmetic; domain-checked.
double chernoff_lower_tail(double mu, double delta);

struct DrcParams {
    int k = 2;             // arity of the co-degree guarantee
    int t = 2;             // sample size (with replacement) from B
    double epsilon = 0.5;  // density lower bound e(H) >= epsilon*|A|*|B|
    double delta = 0.25;   // allowed fraction of bad k-sets, relative to |S|^k
    double gamma = 0.1;    // co-degree demand: >= gamma*|B| common neighbours
    int max_retries = 64;
    std::uint64_t seed = 0;
    bool check_density = true; // verify the epsilon precondition up front
};

enum class CountMode { exact, sampled };

// Verified output of one dependent-random-choice run.  Both contract bounds
// are re-checked before returning: |S| >= size_bound and the number of
// unordered bad k-subsets of S (common neighbourhood below gamma*|B|) is at
// most bad_bound = delta * |S|^k.
struct DrcResult {
    VertexSet s;                       // subset of A (index space)
    std::uint64_t bad_k_sets = 0;      // unordered k-subsets below the demand
    double size_bound = 0.0;           // (1/2) * epsilon^t * |A|
    double bad_bound = 0.0;            // delta * |S|^k
    int retries = 0;
    std::vector<int> witness_t;        // the sampled B-vertices defining S
    CountMode count_mode = CountMode::exact;
    int chosen_t = 0;                  // t actually used
    int computed_c = 0;                // smallest C with delta^C <= (1/2)(1/r)^t (k_set_drc)
};

// Core sampler: S = common neighbourhood of t B-vertices drawn with
// replacement; resamples until both contract bounds hold.
DrcResult dependent_random_choice(const BipartiteGraph& h, const DrcParams& p);

// Specialization for colour classes at density 1/r: gamma = (1/r)^k / 2 and t
// is the smallest integer with 2^(t-2) <= 1/delta < 2^(t-1), which makes
// delta * epsilon^(k*t) >= 2 * gamma^t automatic.  Requires 0 < delta < 1/2.
DrcResult k_set_drc(const BipartiteGraph& h, int r, int k, double delta,
                    std::uint64_t seed, int max_retries = 64, bool check_density = true);

// Pair specialization: k = 2, t = 4, gamma = epsilon^3; needs delta >= 2*epsilon^4
// and 0 < epsilon < 1.
DrcResult pair_drc(const BipartiteGraph& h, double epsilon, double delta,
                   std::uint64_t seed, int max_retries = 64, bool check_density = true);

// Brute-force recount of bad k-subsets (testing oracle; always exact).
std::uint64_t count_bad_k_sets(const BipartiteGraph& h, const VertexSet& s, int k,
                               double gamma);

} // namespace monotile
