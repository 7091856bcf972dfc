#include "monotile/coloured_graph.hpp"

#include <string>

#include "monotile/errors.hpp"
#include "monotile/rng.hpp"

namespace monotile {

namespace {

std::size_t pair_count(int n) {
    return static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
}

} // namespace

ColouredCompleteGraph::ColouredCompleteGraph(int n, int r, const std::vector<int>& colours)
    : n_(n), r_(r) {
    if (n < 0) throw PreconditionError("n must be >= 0");
    if (r < 1 || r > 256) throw PreconditionError("r must be in [1, 256]");
    if (colours.size() != pair_count(n))
        throw PreconditionError("expected " + std::to_string(pair_count(n)) +
                                " edge colours, got " + std::to_string(colours.size()));
    colours_.resize(colours.size());
    for (std::size_t i = 0; i < colours.size(); ++i) {
        int c = colours[i];
        if (c < 0 || c >= r)
            throw PreconditionError("colour id " + std::to_string(c) + " out of range [0, " +
                                    std::to_string(r) + ")");
        colours_[i] = static_cast<std::uint8_t>(c);
    }
    build_adjacency();
}

ColouredCompleteGraph ColouredCompleteGraph::uniform_random(int n, int r, std::uint64_t seed) {
    if (n < 0) throw PreconditionError("n must be >= 0");
    if (r < 1 || r > 256) throw PreconditionError("r must be in [1, 256]");
    ColouredCompleteGraph g;
    g.n_ = n;
    g.r_ = r;
    g.colours_.resize(pair_count(n));
    SplitRng rng = SplitRng(seed).sub("gen/uniform");
    for (auto& c : g.colours_)
        c = static_cast<std::uint8_t>(rng.below(static_cast<std::uint64_t>(r)));
    g.build_adjacency();
    return g;
}

ColouredCompleteGraph ColouredCompleteGraph::single_colour(int n, int r, int colour) {
    if (r < 1 || r > 256) throw PreconditionError("r must be in [1, 256]");
    if (colour < 0 || colour >= r) throw PreconditionError("colour id out of range");
    ColouredCompleteGraph g;
    g.n_ = n;
    g.r_ = r;
    g.colours_.assign(pair_count(n), static_cast<std::uint8_t>(colour));
    g.build_adjacency();
    return g;
}

ColouredCompleteGraph ColouredCompleteGraph::blocks(const std::vector<int>& parts, int r,
                                                    const std::vector<std::vector<int>>& colour_matrix) {
    if (r < 1 || r > 256) throw PreconditionError("r must be in [1, 256]");
    const std::size_t p = parts.size();
    if (colour_matrix.size() != p)
        throw PreconditionError("colour matrix must be parts x parts");
    int n = 0;
    for (int s : parts) {
        if (s < 0) throw PreconditionError("part sizes must be >= 0");
        n += s;
    }
    for (std::size_t i = 0; i < p; ++i) {
        if (colour_matrix[i].size() != p)
            throw PreconditionError("colour matrix must be parts x parts");
        for (std::size_t j = 0; j < p; ++j) {
            if (colour_matrix[i][j] != colour_matrix[j][i])
                throw PreconditionError("colour matrix must be symmetric");
            if (colour_matrix[i][j] < 0 || colour_matrix[i][j] >= r)
                throw PreconditionError("colour id out of range in colour matrix");
        }
    }
    std::vector<int> part_of(static_cast<std::size_t>(n));
    int v = 0;
    for (std::size_t i = 0; i < p; ++i)
        for (int k = 0; k < parts[i]; ++k) part_of[static_cast<std::size_t>(v++)] = static_cast<int>(i);

    ColouredCompleteGraph g;
    g.n_ = n;
    g.r_ = r;
    g.colours_.resize(pair_count(n));
    for (int u = 0; u < n; ++u)
        for (int w = u + 1; w < n; ++w)
            g.colours_[g.pair_index(u, w)] = static_cast<std::uint8_t>(
                colour_matrix[static_cast<std::size_t>(part_of[static_cast<std::size_t>(u)])]
                             [static_cast<std::size_t>(part_of[static_cast<std::size_t>(w)])]);
    g.build_adjacency();
    return g;
}

std::size_t ColouredCompleteGraph::pair_index(int u, int v) const {
    if (u > v) std::swap(u, v);
    // row-major upper triangle: all pairs with first coordinate < u come first
    return static_cast<std::size_t>(u) * static_cast<std::size_t>(n_)
         - static_cast<std::size_t>(u) * static_cast<std::size_t>(u + 1) / 2
         + static_cast<std::size_t>(v - u - 1);
}

void ColouredCompleteGraph::build_adjacency() {
    adj_.assign(static_cast<std::size_t>(r_) * static_cast<std::size_t>(n_), VertexSet(n_));
    for (int u = 0; u < n_; ++u) {
        for (int v = u + 1; v < n_; ++v) {
            int c = static_cast<int>(colours_[pair_index(u, v)]);
            adj_[static_cast<std::size_t>(c) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(u)].insert(v);
            adj_[static_cast<std::size_t>(c) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v)].insert(u);
        }
    }
}

VertexSet ColouredCompleteGraph::common_neighbourhood(const std::vector<int>& s, int colour,
                                                      const VertexSet& within) const {
    VertexSet acc = within;
    for (int v : s) acc &= neighbours(colour, v);
    for (int v : s) if (v >= 0 && v < n_ && acc.contains(v)) acc.erase(v);
    return acc;
}

VertexSet ColouredCompleteGraph::common_neighbourhood(const VertexSet& s, int colour,
                                                      const VertexSet& within) const {
    VertexSet acc = within;
    for (int v = s.first(); v >= 0; v = s.next(v)) acc &= neighbours(colour, v);
    acc -= s;
    return acc;
}

std::vector<std::int64_t> ColouredCompleteGraph::colour_histogram(const VertexSet& within) const {
    std::vector<std::int64_t> hist(static_cast<std::size_t>(r_), 0);
    for (int u = within.first(); u >= 0; u = within.next(u))
        for (int c = 0; c < r_; ++c) {
            VertexSet row = neighbours(c, u);
            row &= within;
            int cnt = 0;
            for (int v = row.next(u); v >= 0; v = row.next(v)) ++cnt; // only v > u
            hist[static_cast<std::size_t>(c)] += cnt;
        }
    return hist;
}

bool ColouredCompleteGraph::is_single_colour() const {
    if (colours_.empty()) return true;
    for (auto c : colours_)
        if (c != colours_[0]) return false;
    return true;
}

std::uint64_t ColouredCompleteGraph::digest() const {
    std::uint64_t h = fnv1a64("coloured-complete-graph");
    h = fnv1a64_mix(h, static_cast<std::uint64_t>(n_));
    h = fnv1a64_mix(h, static_cast<std::uint64_t>(r_));
    for (auto c : colours_) h = fnv1a64_mix(h, c);
    return h;
}

} // namespace monotile
