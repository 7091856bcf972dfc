#include "monotile/tiling.hpp"

#include <string>

namespace monotile {

namespace {

std::string tile_tag(std::size_t i, const Embedding& e) {
    return "tile " + std::to_string(i) + " (order " + std::to_string(e.order) + ")";
}

} // namespace

VerifyReport verify_embedding(const ColouredCompleteGraph& g, const SequenceSpec& spec,
                              const Embedding& emb) {
    VerifyReport rep;
    if (emb.order < 1) {
        rep.fail("tile order must be >= 1");
        return rep;
    }
    if (static_cast<int>(emb.vertices.size()) != emb.order) {
        rep.fail("tile stores " + std::to_string(emb.vertices.size()) + " vertices for order " +
                 std::to_string(emb.order));
        return rep;
    }
    VertexSet used(g.n());
    for (int v : emb.vertices) {
        if (v < 0 || v >= g.n()) {
            rep.fail("tile vertex " + std::to_string(v) + " outside host");
            return rep;
        }
        if (used.contains(v)) {
            rep.fail("tile repeats host vertex " + std::to_string(v));
            return rep;
        }
        used.insert(v);
    }
    if (emb.order == 1) {
        if (emb.colour != kSingletonColour && (emb.colour < 0 || emb.colour >= g.r()))
            rep.fail("singleton tile carries invalid colour " + std::to_string(emb.colour));
        return rep;
    }
    if (emb.colour < 0 || emb.colour >= g.r()) {
        rep.fail("tile colour " + std::to_string(emb.colour) + " out of range");
        return rep;
    }
    BipartiteMember mem = member(spec, emb.order);
    for (auto [a, b] : mem.edges) {
        int hu = emb.vertices[static_cast<std::size_t>(a)];
        int hv = emb.vertices[static_cast<std::size_t>(b)];
        if (g.colour_of(hu, hv) != emb.colour) {
            rep.fail("edge (" + std::to_string(hu) + "," + std::to_string(hv) + ") has colour " +
                     std::to_string(g.colour_of(hu, hv)) + ", tile expects " +
                     std::to_string(emb.colour));
            return rep;
        }
    }
    return rep;
}

VerifyReport verify_tiling_over(const ColouredCompleteGraph& g, const SequenceSpec& spec,
                                const Tiling& tiling, const VertexSet& target) {
    VerifyReport rep;
    VertexSet seen(g.n());
    long long total = 0;
    for (std::size_t i = 0; i < tiling.tiles.size(); ++i) {
        const Embedding& e = tiling.tiles[i];
        VerifyReport one = verify_embedding(g, spec, e);
        if (!one) {
            for (auto& v : one.violations) rep.fail(tile_tag(i, e) + ": " + v);
            continue;
        }
        for (int v : e.vertices) {
            if (seen.contains(v))
                rep.fail(tile_tag(i, e) + ": host vertex " + std::to_string(v) +
                         " already covered");
            else
                seen.insert(v);
            if (!target.contains(v))
                rep.fail(tile_tag(i, e) + ": host vertex " + std::to_string(v) +
                         " outside target set");
        }
        total += e.order;
    }
    int want = target.count();
    if (total != want)
        rep.fail("tiles cover " + std::to_string(total) + " vertices, target has " +
                 std::to_string(want));
    if (!(seen == target))
        rep.fail("covered set differs from target set");
    return rep;
}

VerifyReport verify_tiling(const ColouredCompleteGraph& g, const SequenceSpec& spec,
                           const Tiling& tiling) {
    return verify_tiling_over(g, spec, tiling, VertexSet::full(g.n()));
}

} // namespace monotile
