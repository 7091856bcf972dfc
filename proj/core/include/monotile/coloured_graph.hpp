#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "monotile/vertex_set.hpp"

namespace monotile {

// Complete graph on [0, n) with an r-colouring of the edges.  Colours are
// stored once in the upper triangle (row-major, pair (u,v) with u < v) and
// mirrored into per-colour adjacency bitrows so that common-neighbourhood
// queries cost O(n/64) per already-placed vertex.
//
// Colour ids live in [0, r); storage is one byte per edge, so r <= 256.
class ColouredCompleteGraph {
public:
    ColouredCompleteGraph() = default;

    // Explicit colour assignment in upper-triangle row-major order.
    ColouredCompleteGraph(int n, int r, const std::vector<int>& colours);

    static ColouredCompleteGraph uniform_random(int n, int r, std::uint64_t seed);
    static ColouredCompleteGraph single_colour(int n, int r, int colour = 0);
    // parts[p] = size of part p; colour_matrix[p][q] = colour of edges between
    // parts p and q (symmetric; diagonal colours edges inside a part).
    static ColouredCompleteGraph blocks(const std::vector<int>& parts, int r,
                                        const std::vector<std::vector<int>>& colour_matrix);

    int n() const { return n_; }
    int r() const { return r_; }

    int colour_of(int u, int v) const {
        return static_cast<int>(colours_[pair_index(u, v)]);
    }

    // N_c(u) as a bitset over [0, n).
    const VertexSet& neighbours(int colour, int u) const {
        return adj_[static_cast<std::size_t>(colour) * static_cast<std::size_t>(n_)
                    + static_cast<std::size_t>(u)];
    }

    // Vertices of `within` \ s adjacent in `colour` to every vertex of s.
    // An empty s returns `within` unchanged.
    VertexSet common_neighbourhood(const std::vector<int>& s, int colour,
                                   const VertexSet& within) const;
    VertexSet common_neighbourhood(const VertexSet& s, int colour,
                                   const VertexSet& within) const;

    // Number of edges of each colour with both ends in `within`.
    std::vector<std::int64_t> colour_histogram(const VertexSet& within) const;

    bool is_single_colour() const;

    std::size_t pair_index(int u, int v) const;

    const std::vector<std::uint8_t>& colour_data() const { return colours_; }

    // FNV digest of (n, r, colours); stable across runs, used as instance key.
    std::uint64_t digest() const;

private:
    void build_adjacency();

    int n_ = 0;
    int r_ = 1;
    std::vector<std::uint8_t> colours_;
    std::vector<VertexSet> adj_;
};

} // namespace monotile
