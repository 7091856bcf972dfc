#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "monotile/coloured_graph.hpp"
#include "monotile/sequence.hpp"
#include "monotile/tiling.hpp"
#include "monotile/vertex_set.hpp"

namespace monotile {

// Size thresholds behind the guarantees below.
double density_member_threshold(int delta, double eps, int k); // 32 * Delta * eps^-Delta * k
double mono_member_threshold(int delta, int r, int k);         // 32 * Delta * r^Delta * k
double greedy_cover_bound(int delta, int r, double s, double t); // 64*Delta*r^Delta*(ln(s/t)+2)

struct EmbedSearchStats {
    std::int64_t nodes = 0;
    bool budget_hit = false;
};

// Backtracking embedder: a copy of member(spec, k) inside `within` using only
// edges of `colour`.  Vertices are placed component by component in BFS order
// so every new vertex lands in the common neighbourhood of its placed
// neighbours (bitset intersections).  Deterministic; nullopt on failure or
// budget exhaustion (stats say which).
std::optional<Embedding> embed_member_backtracking(const ColouredCompleteGraph& g,
                                                   const VertexSet& within,
                                                   const SequenceSpec& spec, int k, int colour,
                                                   std::int64_t node_budget,
                                                   EmbedSearchStats* stats = nullptr);

enum class MonoStrategy { automatic, backtrack, drc_guided };

struct MonoCopyOptions {
    MonoStrategy strategy = MonoStrategy::automatic;
    std::int64_t node_budget = 2'000'000;
    int max_retries = 8; // drc-guided resamples
};

struct MonoCopyResult {
    Embedding embedding;
    std::string strategy; // "singleton" | "backtrack" | "drc"
    int drc_witness_size = 0;
    int drc_retries = 0;
    std::int64_t nodes = 0;
};

// Monochromatic copy of member(spec, k) inside `within`.  Guaranteed to exist
// when |within| >= mono_member_threshold(Delta, r, k): some colour has density
// >= 1/r there.  Colours are tried by decreasing edge count.  The automatic
// strategy backtracks with escalating budgets, then falls back to the
// DRC-guided two-phase embedding; the chosen route is recorded in `strategy`.
std::optional<MonoCopyResult> find_mono_copy(const ColouredCompleteGraph& g,
                                             const VertexSet& within, const SequenceSpec& spec,
                                             int k, std::uint64_t seed,
                                             const MonoCopyOptions& opts = {});

// Single-colour density form: a copy of member(spec, k) in `colour` inside
// `within`, guaranteed when the colour has density >= eps on `within` and
// |within| >= density_member_threshold(Delta, eps, k).
std::optional<MonoCopyResult> find_dense_copy(const ColouredCompleteGraph& g,
                                              const VertexSet& within, int colour, double eps,
                                              const SequenceSpec& spec, int k,
                                              std::uint64_t seed,
                                              const MonoCopyOptions& opts = {});

struct GreedyCoverResult {
    std::vector<Embedding> tiles;
    VertexSet residual;     // < t_target vertices for t_target > 1, else <= 1
    double bound = 0.0;     // greedy_cover_bound(Delta, r, |within|, t_target)
    int singleton_tiles = 0;
};

// Cover all but fewer than t_target vertices of `within` (at most one when
// t_target == 1) with vertex-disjoint monochromatic members, using at most
// greedy_cover_bound(...) tiles.  Each round tries members largest-first: a
// cheap halving ladder capped at order 128, plus the guaranteed order
// floor(s/(32 Delta r^Delta)) at full budget; singletons only when every
// attempt fails.  Requires t_target >= 1.
GreedyCoverResult greedy_cover(const ColouredCompleteGraph& g, const VertexSet& within,
                               const SequenceSpec& spec, int t_target, std::uint64_t seed,
                               const MonoCopyOptions& opts = {});

} // namespace monotile
