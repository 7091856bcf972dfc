#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace monotile {

enum class Family { path, matching, caterpillar, blocky, random_bipartite };

// A bounded-degree bipartite graph sequence: member(i) has exactly i vertices,
// maximum degree at most delta_bound(), and at most one isolated vertex.
//
// Spec string grammar:
//   "path" | "matching" | "caterpillar:D=3" | "blocky:D=2" | "random:D=3:seed=9"
// (seed defaults to 0 when omitted).
struct SequenceSpec {
    Family family = Family::path;
    int delta = 2;
    std::uint64_t family_seed = 0;

    static SequenceSpec parse(const std::string& text);
    std::string to_string() const;

    // Degree bound used by all threshold formulas.
    int delta_bound() const;
};

// One member of the sequence, normalized: at most one isolated vertex, and the
// bipartition is oriented so that every vertex of `left` has degree >= 1.
struct BipartiteMember {
    int order = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<int> left;   // X': min degree 1
    std::vector<int> right;  // Y': may contain the single isolated vertex
    std::vector<int> degree;

    std::vector<std::vector<int>> adjacency() const;
};

// member(spec, i).  Throws PreconditionError for i < 1 or when the family has
// no member of that order (caterpillar with delta < 2 stops at order 2).
BipartiteMember member(const SequenceSpec& spec, int i);

// Multihypergraph carried by a member: one vertex per X' vertex, one hyperedge
// N(y) per Y' vertex, repetitions kept.  edge j corresponds to y_vertices[j].
struct DerivedMultiHypergraph {
    int m = 0;                                // |X'|
    std::vector<std::vector<int>> edges;      // sorted vertex lists over [0, m)
    std::vector<int> x_vertices;              // member id of hypergraph vertex
    std::vector<int> y_vertices;              // member id behind each hyperedge

    int edge_count() const { return static_cast<int>(edges.size()); }
    int max_edge_size() const;
    int max_degree() const;
    int min_degree() const;
};

DerivedMultiHypergraph derive_hypergraph(const BipartiteMember& m);

} // namespace monotile
