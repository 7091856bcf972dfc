#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "monotile/absorption.hpp"
#include "monotile/coloured_graph.hpp"
#include "monotile/sequence.hpp"
#include "monotile/tiling.hpp"
#include "monotile/vertex_set.hpp"

namespace monotile {

enum class PipelineMode { faithful, practical };

// Constants of the colour induction.  The eps schedule (1/(2^k r^Delta)) is
// identical in both modes; practical mode only replaces the delta family and
// the absolute size gates, which are unreachable below astronomical n.
struct PipelineParams {
    PipelineMode mode = PipelineMode::practical;
    std::uint64_t seed = 0;

    double c_embed = 0.1;   // c: careful-embedding constant
    double big_c = 64.0;    // C: k-set DRC exponent cap
    double c_r = 0.0;       // reporting-only target exponent (never asserted)

    // practical-mode replacements
    int min_induction = 32;        // terminal when |A| falls below this
    double practical_delta = 0.25; // DRC delta for the U selection
    double u_fraction = 0.25;      // target |U| ~ u_fraction |A|
    int combine_u_min = 0;         // 0: the 200 r^2 Delta escape gate
    int resample_cap = 16;         // A' redraws for the Markov conditions
    std::uint64_t subset_count_cap = 200'000; // exact bad-set counting cap

    FindGoodOptions good; // forwarded to find_good_subgraph per colour

    double eps(int k, int r, int delta) const;          // 1/(2^k r^delta)
    double delta_k(int k, int r, int delta) const;      // exp(-(100 C r D / c)^{2(r-k)+3})
    double delta_prime(int k, int r, int delta) const;  // exponent 2(r-k)+1
    double delta_dprime(int k, int r, int delta) const; // exponent 2(r-k)+2
    double theta(int delta, int r) const { return good_theta(delta, r); }
    std::string digest() const; // canonical parameter string for artifacts
};

// One colour's absorber inside a combined D.
struct ColourAbsorber {
    int colour = -1;
    bool ok = false;          // witness built and verified
    std::string note;         // stage tag when !ok
    VertexSet d_i;            // X u Y of this colour's good subgraph
    VertexSet w_i;            // vertices with >= |U|/(4r) colour neighbours in U
    GoodSubgraphWitness witness;
};

// D = union of per-colour good subgraphs plus the routing data the absorb
// callback needs.  `escaped` means D is empty and any Z is covered greedily.
struct CombinedAbsorber {
    VertexSet d;
    std::vector<ColourAbsorber> colours; // in routing order
    bool escaped = false;
    std::string escape_reason;
};

// Builds D for colours[0..k-1] over shrinking U against vs[i], with the
// small-U / huge-W escape hatch.  vs and colours are aligned; eps is the
// level density (find_good_subgraph runs at eps/2).
CombinedAbsorber combine_absorbers(const ColouredCompleteGraph& g, const SequenceSpec& spec,
                                   const VertexSet& u, const std::vector<VertexSet>& vs,
                                   const std::vector<int>& colours, const VertexSet& w,
                                   double eps, const PipelineParams& params,
                                   std::uint64_t seed);

// The absorb callback: a verified tiling of exactly D u Z.  Z is routed by
// first fit: Z_i = (Z \ (D u W_1 u ... u W_{i-1})) n W_i goes to colour i's
// absorber; the remainder (and everything when escaped) is covered greedily.
Tiling absorb_with(const ColouredCompleteGraph& g, const SequenceSpec& spec,
                   const CombinedAbsorber& ca, const VertexSet& z, std::uint64_t seed);

struct InductionOutcome {
    bool terminal = false;        // |A' u B'| <= 2, or a practical stop
    std::string terminal_reason;  // "small-A" | "drc-failed" | "no-next-colour" | ...
    VertexSet a_next, b_next;     // A' and B'
    std::vector<VertexSet> v_next; // V'_1..V'_k aligned with used_colours
    CombinedAbsorber absorber;    // D of this level (empty when escaped)
    VertexSet w;                  // W of this level
    int next_colour = -1;         // majority colour outside used_colours
    int u_size = 0;
    int resamples = 0;
};

// One induction level: U by DRC on the colour-k class between A and B,
// W by the |U|/(4r) rule, combine_absorbers over used colours, then the
// random A'/B' split re-drawn until the Markov and colour-count conditions
// hold.  used_colours lists the paper's colours 1..k (last = current k).
InductionOutcome induction_step(const ColouredCompleteGraph& g, const SequenceSpec& spec,
                                const VertexSet& a, const VertexSet& b,
                                const std::vector<VertexSet>& vs_prev,
                                const std::vector<int>& used_colours,
                                const PipelineParams& params, std::uint64_t seed);

struct AbsorberLevel {
    int level = 0;   // 1-based
    int colour = -1; // this level's majority colour (original id)
    VertexSet t;     // T_level
    CombinedAbsorber absorber;
    VertexSet w;
    int u_size = 0;
    int resamples = 0;
};

struct AbsorberLadder {
    int ell = 0;                      // levels built (<= r)
    std::vector<AbsorberLevel> levels;
    VertexSet t_final;                // T_{ell+1}
    bool truncated = false;           // practical failure: |t_final| may exceed 2
    std::string truncation_reason;
    std::vector<int> colour_order;    // level -> original colour id
};

// T_1 = V(G); halves A/B from the seed, level colour = most frequent crossing
// colour, then induction_step per level, at most r times.
AbsorberLadder iterated_absorbers(const ColouredCompleteGraph& g, const SequenceSpec& spec,
                                  const PipelineParams& params, std::uint64_t seed);

struct TileMetrics {
    std::size_t size = 0;
    std::vector<std::string> stages; // which stages ran, in order
    std::string path;                // "pipeline" | "greedy" | "single-colour" | "trivial"
    std::uint64_t seed = 0;
    std::string params_digest;
    int ladder_levels = 0;
    bool ladder_truncated = false;
    double greedy_bound = 0.0;       // 64 Delta r^Delta (ln n + 2)
};

struct TileResult {
    Tiling tiling;
    TileMetrics metrics;
};

// End-to-end tiler.  Builds the ladder, absorbs Z_i = T_i \ (T_{i+1} u D)
// level by level, singleton-tiles T_{ell+1}; any stage failure (or a size
// above the greedy bound) falls back to pure greedy covering, so the output
// is always a verified full tiling within the greedy bound.
TileResult tile(const ColouredCompleteGraph& g, const SequenceSpec& spec,
                const PipelineParams& params = {});

} // namespace monotile
