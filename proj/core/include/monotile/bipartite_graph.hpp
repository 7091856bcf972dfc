#pragma once

#include <cstdint>
#include <vector>

#include "monotile/coloured_graph.hpp"
#include "monotile/vertex_set.hpp"

namespace monotile {

// Bipartite graph on index spaces A = [0, a_size) and B = [0, b_size), stored
// as bitrows from both sides.  When built from a colour class the original
// host vertex ids are kept in a_hosts/b_hosts.
class BipartiteGraph {
public:
    BipartiteGraph() = default;
    BipartiteGraph(int a_size, int b_size);

    static BipartiteGraph colour_class(const ColouredCompleteGraph& g,
                                       const std::vector<int>& a_hosts,
                                       const std::vector<int>& b_hosts, int colour);

    void add_edge(int a, int b);

    int a_size() const { return static_cast<int>(rows_.size()); }
    int b_size() const { return b_size_; }

    const VertexSet& row(int a) const { return rows_[static_cast<std::size_t>(a)]; }
    const VertexSet& col(int b) const { return cols_[static_cast<std::size_t>(b)]; }

    std::int64_t edge_count() const;
    double density() const;

    // Common neighbourhood in B of a set of A-vertices (all of B for empty s).
    VertexSet common_neighbourhood(const std::vector<int>& s) const;

    std::vector<int> a_hosts, b_hosts; // optional host labels

private:
    int b_size_ = 0;
    std::vector<VertexSet> rows_; // A -> subset of B
    std::vector<VertexSet> cols_; // B -> subset of A
};

} // namespace monotile
