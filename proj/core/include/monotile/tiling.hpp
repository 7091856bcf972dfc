#pragma once

#include <string>
#include <vector>

#include "monotile/coloured_graph.hpp"
#include "monotile/sequence.hpp"
#include "monotile/vertex_set.hpp"

namespace monotile {

// Colour recorded on 1-vertex tiles, which are monochromatic vacuously.
inline constexpr int kSingletonColour = -1;

// A placed copy of member(spec, order): vertices[i] hosts member vertex i.
struct Embedding {
    int order = 0;
    int colour = kSingletonColour;
    std::vector<int> vertices;

    VertexSet vertex_set(int n) const {
        VertexSet s(n);
        for (int v : vertices) s.insert(v);
        return s;
    }
};

// A collection of vertex-disjoint monochromatic members.  A full tiling
// partitions [0, n); a cover (cover_only = true) may leave a residual.
struct Tiling {
    int n = 0;
    SequenceSpec spec;
    std::vector<Embedding> tiles;
    bool cover_only = false;

    std::size_t size() const { return tiles.size(); }

    VertexSet covered() const {
        VertexSet s(n);
        for (const auto& t : tiles)
            for (int v : t.vertices) s.insert(v);
        return s;
    }

    void append(const Tiling& other) {
        for (const auto& t : other.tiles) tiles.push_back(t);
    }
};

struct VerifyReport {
    bool pass = true;
    std::vector<std::string> violations;

    explicit operator bool() const { return pass; }

    void fail(std::string why) {
        pass = false;
        violations.push_back(std::move(why));
    }
};

// Structural validity of one tile: injective map into [0, n), colour id sane,
// and every member edge present in the recorded colour.
VerifyReport verify_embedding(const ColouredCompleteGraph& g, const SequenceSpec& spec,
                              const Embedding& emb);

// Tiles are pairwise disjoint, individually valid, and cover `target`
// exactly.  The three-argument form targets all of [0, n).
VerifyReport verify_tiling(const ColouredCompleteGraph& g, const SequenceSpec& spec,
                           const Tiling& tiling);
VerifyReport verify_tiling_over(const ColouredCompleteGraph& g, const SequenceSpec& spec,
                                const Tiling& tiling, const VertexSet& target);

} // namespace monotile
