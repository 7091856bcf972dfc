#pragma once

#include <cstdint>
#include <string>

#include "monotile/coloured_graph.hpp"
#include "monotile/pipeline.hpp"
#include "monotile/tiling.hpp"

namespace monotile {

// Colouring text format.  Line 1 is "n r"; the remaining tokens are the
// n(n-1)/2 colour ids of the pairs (u, v), u < v, in row-major upper-triangle
// order (all pairs with u = 0 first, then u = 1, ...).  Whitespace between
// tokens is free-form; we emit one row per u.
std::string graph_to_text(const ColouredCompleteGraph& g);
ColouredCompleteGraph graph_from_text(const std::string& text);  // throws ParseError

// JSON mirror: {"n": ..., "r": ..., "colours": [...]} with the same pair order.
std::string graph_to_json(const ColouredCompleteGraph& g);
ColouredCompleteGraph graph_from_json(const std::string& text);  // throws ParseError

// Tiling artifact, deterministic ordered-key JSON:
//   {n, r, spec, tiles: [{colour, order, vertices}],
//    metrics: {size, stages, seed, params-digest, path}}
// Vertices are listed in member order (the embedding's own order).  No
// wall-clock data goes in, so equal seeds give byte-identical artifacts.
std::string tiling_to_json(int r, const TileResult& result);

struct ParsedTiling {
    Tiling tiling;  // n, spec and tiles filled in; cover_only left false
    int r = 0;
    std::size_t metrics_size = 0;  // the "size" the artifact claims
};
ParsedTiling tiling_from_json(const std::string& text);  // throws ParseError

// 16-digit lowercase hex of a 64-bit digest.
std::string hex_digest(std::uint64_t value);

}  // namespace monotile
