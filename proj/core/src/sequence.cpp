#include "monotile/sequence.hpp"

#include <algorithm>
#include <set>

#include "monotile/errors.hpp"
#include "monotile/rng.hpp"

namespace monotile {

namespace {

// "key=value" suffix parser for the spec grammar.
std::uint64_t parse_u64(const std::string& s, const std::string& what) {
    if (s.empty()) throw ParseError("empty " + what + " in sequence spec");
    std::uint64_t v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') throw ParseError("bad " + what + " in sequence spec: " + s);
        v = v * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return v;
}

struct Builder {
    int order;
    std::vector<std::pair<int, int>> edges;
    std::vector<int> side;   // 0 = left candidate, 1 = right candidate
    std::vector<int> degree;

    explicit Builder(int i) : order(i), side(static_cast<std::size_t>(i), 0),
                              degree(static_cast<std::size_t>(i), 0) {}

    void add_edge(int u, int v) {
        edges.emplace_back(u, v);
        ++degree[static_cast<std::size_t>(u)];
        ++degree[static_cast<std::size_t>(v)];
    }

    BipartiteMember finish() const {
        BipartiteMember m;
        m.order = order;
        m.edges = edges;
        std::sort(m.edges.begin(), m.edges.end());
        m.degree = degree;
        for (int v = 0; v < order; ++v) {
            // isolated vertices always land on the right so X' has min degree 1
            if (degree[static_cast<std::size_t>(v)] > 0 && side[static_cast<std::size_t>(v)] == 0)
                m.left.push_back(v);
            else
                m.right.push_back(v);
        }
        return m;
    }
};

BipartiteMember build_path(int i) {
    Builder b(i);
    for (int v = 0; v + 1 < i; ++v) b.add_edge(v, v + 1);
    for (int v = 0; v < i; ++v) b.side[static_cast<std::size_t>(v)] = v & 1;
    return b.finish();
}

BipartiteMember build_matching(int i) {
    Builder b(i);
    for (int v = 0; v + 1 < i; v += 2) {
        b.add_edge(v, v + 1);
        b.side[static_cast<std::size_t>(v + 1)] = 1;
    }
    if (i & 1) b.side[static_cast<std::size_t>(i - 1)] = 1;
    return b.finish();
}

BipartiteMember build_caterpillar(int i, int delta) {
    if (i <= 2) return build_path(i);
    if (delta < 2)
        throw PreconditionError("unsatisfiable family: caterpillar with delta < 2 has no member of order " +
                                std::to_string(i));
    // Shortest spine whose leg capacity reaches i vertices; legs fill greedily
    // along the spine.  Endpoints take delta-1 legs, inner vertices delta-2.
    auto capacity = [&](int s) -> long long {
        if (s == 1) return delta;
        return 2LL * (delta - 1) + static_cast<long long>(s - 2) * (delta - 2);
    };
    int spine = 1;
    while (spine < i && spine + capacity(spine) < i) ++spine;
    Builder b(i);
    for (int v = 0; v + 1 < spine; ++v) b.add_edge(v, v + 1);
    for (int v = 0; v < spine; ++v) b.side[static_cast<std::size_t>(v)] = v & 1;
    int next_leg = spine;
    for (int v = 0; v < spine && next_leg < i; ++v) {
        while (b.degree[static_cast<std::size_t>(v)] < delta && next_leg < i) {
            b.add_edge(v, next_leg);
            b.side[static_cast<std::size_t>(next_leg)] = 1 - (v & 1);
            ++next_leg;
        }
    }
    return b.finish();
}

BipartiteMember build_blocky(int i, int delta) {
    // Disjoint complete bipartite blocks K_{delta,delta}; the remainder forms
    // one smaller block K_{a,b} with a+b < 2*delta (possibly a lone vertex).
    Builder b(i);
    int base = 0;
    while (base < i) {
        int m = std::min(2 * delta, i - base);
        int a = m / 2;
        for (int u = 0; u < a; ++u)
            for (int v = a; v < m; ++v) b.add_edge(base + u, base + v);
        for (int v = a; v < m; ++v) b.side[static_cast<std::size_t>(base + v)] = 1;
        base += m;
    }
    return b.finish();
}

BipartiteMember build_random_bipartite(int i, int delta, std::uint64_t family_seed) {
    // Canonical construction, reproducible from (family_seed, i): balanced
    // bipartition (left = [0, ceil(i/2))), then a fixed number of seeded edge
    // draws rejected on degree caps and duplicates, then isolated-vertex
    // repair (pairs of isolated vertices are re-sided and joined by an edge).
    Builder b(i);
    int l = (i + 1) / 2;
    int rsz = i - l;
    for (int v = l; v < i; ++v) b.side[static_cast<std::size_t>(v)] = 1;
    if (rsz > 0) {
        SplitRng rng = SplitRng(family_seed).sub("sequence/random-bipartite", static_cast<std::uint64_t>(i));
        std::set<std::pair<int, int>> seen;
        long long trials = 2LL * i * delta;
        for (long long t = 0; t < trials; ++t) {
            int u = static_cast<int>(rng.below(static_cast<std::uint64_t>(l)));
            int v = l + static_cast<int>(rng.below(static_cast<std::uint64_t>(rsz)));
            if (b.degree[static_cast<std::size_t>(u)] >= delta) continue;
            if (b.degree[static_cast<std::size_t>(v)] >= delta) continue;
            if (!seen.insert({u, v}).second) continue;
            b.add_edge(u, v);
        }
    }
    // repair: join isolated vertices pairwise, one to each side
    std::vector<int> isolated;
    for (int v = 0; v < i; ++v)
        if (b.degree[static_cast<std::size_t>(v)] == 0) isolated.push_back(v);
    for (std::size_t j = 0; j + 1 < isolated.size(); j += 2) {
        int u = isolated[j], v = isolated[j + 1];
        b.side[static_cast<std::size_t>(u)] = 0;
        b.side[static_cast<std::size_t>(v)] = 1;
        b.add_edge(u, v);
    }
    return b.finish();
}

} // namespace

SequenceSpec SequenceSpec::parse(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t colon = text.find(':', start);
        if (colon == std::string::npos) {
            parts.push_back(text.substr(start));
            break;
        }
        parts.push_back(text.substr(start, colon - start));
        start = colon + 1;
    }
    if (parts.empty() || parts[0].empty()) throw ParseError("empty sequence spec");

    SequenceSpec spec;
    const std::string& name = parts[0];
    if (name == "path") spec.family = Family::path;
    else if (name == "matching") spec.family = Family::matching;
    else if (name == "caterpillar") spec.family = Family::caterpillar;
    else if (name == "blocky") spec.family = Family::blocky;
    else if (name == "random") spec.family = Family::random_bipartite;
    else throw ParseError("unknown sequence family: " + name);

    bool saw_delta = false;
    for (std::size_t p = 1; p < parts.size(); ++p) {
        std::size_t eq = parts[p].find('=');
        if (eq == std::string::npos) throw ParseError("bad sequence spec field: " + parts[p]);
        std::string key = parts[p].substr(0, eq);
        std::string val = parts[p].substr(eq + 1);
        if (key == "D") {
            spec.delta = static_cast<int>(parse_u64(val, "degree bound"));
            saw_delta = true;
        } else if (key == "seed") {
            spec.family_seed = parse_u64(val, "seed");
        } else {
            throw ParseError("unknown sequence spec field: " + key);
        }
    }
    switch (spec.family) {
    case Family::path: spec.delta = 2; break;
    case Family::matching: spec.delta = 1; break;
    default:
        if (!saw_delta) throw ParseError("family '" + name + "' requires D=<bound>");
        if (spec.delta < 1) throw ParseError("degree bound must be >= 1");
        if (spec.family == Family::caterpillar && spec.delta < 2)
            throw ParseError("caterpillar requires D >= 2");
        break;
    }
    return spec;
}

std::string SequenceSpec::to_string() const {
    switch (family) {
    case Family::path: return "path";
    case Family::matching: return "matching";
    case Family::caterpillar: return "caterpillar:D=" + std::to_string(delta);
    case Family::blocky: return "blocky:D=" + std::to_string(delta);
    case Family::random_bipartite:
        return "random:D=" + std::to_string(delta) + ":seed=" + std::to_string(family_seed);
    }
    return "path";
}

int SequenceSpec::delta_bound() const {
    switch (family) {
    case Family::path: return 2;
    case Family::matching: return 1;
    default: return delta;
    }
}

std::vector<std::vector<int>> BipartiteMember::adjacency() const {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(order));
    for (auto [u, v] : edges) {
        adj[static_cast<std::size_t>(u)].push_back(v);
        adj[static_cast<std::size_t>(v)].push_back(u);
    }
    return adj;
}

BipartiteMember member(const SequenceSpec& spec, int i) {
    if (i < 1) throw PreconditionError("member order must be >= 1");
    switch (spec.family) {
    case Family::path: return build_path(i);
    case Family::matching: return build_matching(i);
    case Family::caterpillar: return build_caterpillar(i, spec.delta);
    case Family::blocky: return build_blocky(i, spec.delta);
    case Family::random_bipartite: return build_random_bipartite(i, spec.delta, spec.family_seed);
    }
    throw PreconditionError("unknown family");
}

int DerivedMultiHypergraph::max_edge_size() const {
    int mx = 0;
    for (const auto& e : edges) mx = std::max(mx, static_cast<int>(e.size()));
    return mx;
}

int DerivedMultiHypergraph::max_degree() const {
    std::vector<int> deg(static_cast<std::size_t>(m), 0);
    for (const auto& e : edges)
        for (int v : e) ++deg[static_cast<std::size_t>(v)];
    int mx = 0;
    for (int d : deg) mx = std::max(mx, d);
    return mx;
}

int DerivedMultiHypergraph::min_degree() const {
    if (m == 0) return 0;
    std::vector<int> deg(static_cast<std::size_t>(m), 0);
    for (const auto& e : edges)
        for (int v : e) ++deg[static_cast<std::size_t>(v)];
    int mn = deg[0];
    for (int d : deg) mn = std::min(mn, d);
    return mn;
}

DerivedMultiHypergraph derive_hypergraph(const BipartiteMember& mem) {
    DerivedMultiHypergraph h;
    h.m = static_cast<int>(mem.left.size());
    h.x_vertices = mem.left;
    std::vector<int> index_of(static_cast<std::size_t>(mem.order), -1);
    std::vector<int> on_right(static_cast<std::size_t>(mem.order), 0);
    for (int j = 0; j < h.m; ++j)
        index_of[static_cast<std::size_t>(mem.left[static_cast<std::size_t>(j)])] = j;
    for (int y : mem.right) on_right[static_cast<std::size_t>(y)] = 1;
    for (auto [u, v] : mem.edges) {
        bool crosses = (index_of[static_cast<std::size_t>(u)] >= 0 && on_right[static_cast<std::size_t>(v)]) ||
                       (index_of[static_cast<std::size_t>(v)] >= 0 && on_right[static_cast<std::size_t>(u)]);
        if (!crosses)
            throw PreconditionError("member is not bipartite across (left, right)");
    }
    auto adj = mem.adjacency();
    for (int y : mem.right) {
        std::vector<int> e;
        for (int x : adj[static_cast<std::size_t>(y)])
            e.push_back(index_of[static_cast<std::size_t>(x)]);
        std::sort(e.begin(), e.end());
        h.edges.push_back(std::move(e));
        h.y_vertices.push_back(y);
    }
    return h;
}

} // namespace monotile
