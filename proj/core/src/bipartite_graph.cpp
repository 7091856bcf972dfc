#include "monotile/bipartite_graph.hpp"

#include "monotile/errors.hpp"

namespace monotile {

BipartiteGraph::BipartiteGraph(int a_size, int b_size)
    : b_size_(b_size),
      rows_(static_cast<std::size_t>(a_size), VertexSet(b_size)),
      cols_(static_cast<std::size_t>(b_size), VertexSet(a_size)) {
    if (a_size < 0 || b_size < 0) throw PreconditionError("side sizes must be >= 0");
}

BipartiteGraph BipartiteGraph::colour_class(const ColouredCompleteGraph& g,
                                            const std::vector<int>& a_hosts,
                                            const std::vector<int>& b_hosts, int colour) {
    BipartiteGraph h(static_cast<int>(a_hosts.size()), static_cast<int>(b_hosts.size()));
    h.a_hosts = a_hosts;
    h.b_hosts = b_hosts;
    for (std::size_t i = 0; i < a_hosts.size(); ++i) {
        const VertexSet& row = g.neighbours(colour, a_hosts[i]);
        for (std::size_t j = 0; j < b_hosts.size(); ++j)
            if (row.contains(b_hosts[j])) h.add_edge(static_cast<int>(i), static_cast<int>(j));
    }
    return h;
}

void BipartiteGraph::add_edge(int a, int b) {
    rows_[static_cast<std::size_t>(a)].insert(b);
    cols_[static_cast<std::size_t>(b)].insert(a);
}

std::int64_t BipartiteGraph::edge_count() const {
    std::int64_t e = 0;
    for (const auto& r : rows_) e += r.count();
    return e;
}

double BipartiteGraph::density() const {
    std::int64_t total = static_cast<std::int64_t>(a_size()) * b_size();
    if (total == 0) return 0.0;
    return static_cast<double>(edge_count()) / static_cast<double>(total);
}

VertexSet BipartiteGraph::common_neighbourhood(const std::vector<int>& s) const {
    VertexSet acc = VertexSet::full(b_size_);
    for (int a : s) acc &= rows_[static_cast<std::size_t>(a)];
    return acc;
}

} // namespace monotile
