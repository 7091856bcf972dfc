#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "monotile/coloured_graph.hpp"
#include "monotile/sequence.hpp"
#include "monotile/tiling.hpp"

namespace monotile {

struct OracleResult {
    int min_size = 0;
    Tiling tiling;           // one tiling of exactly min_size tiles
    std::int64_t nodes = 0;  // search nodes explored
    bool optimal = true;     // false when the budget ran out (upper bound only)
    std::uint64_t instance_digest = 0;
};

// True minimum monochromatic member-tiling size by exhaustive search: branch
// on the lowest uncovered vertex, enumerate feasible (subset, colour) tiles
// containing it, memoise on the uncovered bitset.  Tile feasibility = a
// spanning single-colour member copy on the subset (lowest colour wins).
// Requires n <= n_cap.  On budget exhaustion returns the greedy upper bound
// with optimal = false.
OracleResult exact_min_tiling(const ColouredCompleteGraph& g, const SequenceSpec& spec,
                              std::int64_t node_budget = 50'000'000, int n_cap = 12);

struct SweepRow {
    std::uint64_t instance = 0; // enumeration index (or seed when sampled)
    std::uint64_t digest = 0;
    int n = 0;
    int r = 0;
    int min_size = 0;
    bool optimal = true;
};

// Min tiling size per colouring of K_n: all r^C(n,2) colourings when r = 2
// and n <= 6, otherwise `sample_count` seeded colourings.  The max min_size
// over enumerated instances lower-bounds the family tiling number at this n.
std::vector<SweepRow> exact_sweep(int n, int r, const SequenceSpec& spec,
                                  int sample_count = 0, std::uint64_t seed = 0,
                                  std::int64_t node_budget = 20'000'000);

// CSV with header: instance,digest,n,r,spec,min_size,optimal
std::string sweep_csv(const std::vector<SweepRow>& rows, const SequenceSpec& spec);

} // namespace monotile
