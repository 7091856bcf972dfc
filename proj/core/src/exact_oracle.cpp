#include "monotile/exact_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <sstream>
#include <unordered_map>

#include "monotile/errors.hpp"
#include "monotile/ramsey_cover.hpp"
#include "monotile/rng.hpp"
#include "monotile/vertex_set.hpp"

namespace monotile {

namespace {

constexpr int kInfinity = 1 << 20;
constexpr int kInfeasibleTile = -3; // distinct from kSingletonColour == -1

struct OracleSearch {
    const ColouredCompleteGraph& g;
    const SequenceSpec& spec;
    std::int64_t budget;
    std::int64_t nodes = 0;
    bool exhausted = false;
    // feasible colour per vertex-subset mask: -2 unknown, kInfeasibleTile
    // when no colour hosts a spanning member, otherwise the lowest feasible
    // colour (kSingletonColour, which is -1, for singletons)
    std::vector<int> feasible_colour;
    std::unordered_map<std::uint32_t, int> memo;

    OracleSearch(const ColouredCompleteGraph& gg, const SequenceSpec& sp, std::int64_t b)
        : g(gg), spec(sp), budget(b),
          feasible_colour(std::size_t{1} << gg.n(), -2) {}

    VertexSet mask_set(std::uint32_t mask) const {
        VertexSet s(g.n());
        for (std::uint32_t m = mask; m != 0; m &= m - 1)
            s.insert(std::countr_zero(m));
        return s;
    }

    int feasible(std::uint32_t mask) {
        int& slot = feasible_colour[mask];
        if (slot != -2) return slot;
        int order = std::popcount(mask);
        if (order == 1) return slot = kSingletonColour;
        VertexSet within = mask_set(mask);
        for (int c = 0; c < g.r(); ++c) {
            auto emb = embed_member_backtracking(g, within, spec, order, c, 200'000);
            if (emb) return slot = c;
        }
        return slot = kInfeasibleTile;
    }

    int solve(std::uint32_t mask) {
        if (mask == 0) return 0;
        auto it = memo.find(mask);
        if (it != memo.end()) return it->second;
        if (++nodes > budget) {
            exhausted = true;
            return kInfinity;
        }
        std::uint32_t low = mask & (~mask + 1); // lowest uncovered vertex bit
        int best = kInfinity;
        // Enumerate submasks of mask containing `low`.
        std::uint32_t rest = mask ^ low;
        std::uint32_t sub = rest;
        while (true) {
            std::uint32_t tile = sub | low;
            if (feasible(tile) != kInfeasibleTile) {
                int tail = solve(mask ^ tile);
                if (exhausted) return kInfinity;
                best = std::min(best, 1 + tail);
            }
            if (sub == 0) break;
            sub = (sub - 1) & rest;
        }
        memo.emplace(mask, best);
        return best;
    }

    // Rebuild one optimal tiling by replaying the DP decisions.
    void reconstruct(std::uint32_t mask, Tiling& out) {
        while (mask != 0) {
            int want = solve(mask);
            std::uint32_t low = mask & (~mask + 1);
            std::uint32_t rest = mask ^ low;
            std::uint32_t sub = rest;
            bool placed = false;
            while (!placed) {
                std::uint32_t tile = sub | low;
                if (feasible(tile) != kInfeasibleTile && 1 + solve(mask ^ tile) == want) {
                    int order = std::popcount(tile);
                    if (order == 1) {
                        out.tiles.push_back(
                            Embedding{1, kSingletonColour, {std::countr_zero(tile)}});
                    } else {
                        int colour = feasible(tile);
                        auto emb = embed_member_backtracking(g, mask_set(tile), spec, order,
                                                             colour, 200'000);
                        if (!emb)
                            throw StageError("exact-oracle",
                                             "feasible tile failed to re-embed");
                        out.tiles.push_back(*emb);
                    }
                    mask ^= tile;
                    placed = true;
                    break;
                }
                if (sub == 0) break;
                sub = (sub - 1) & rest;
            }
            if (!placed)
                throw StageError("exact-oracle", "reconstruction found no achieving tile");
        }
    }
};

} // namespace

OracleResult exact_min_tiling(const ColouredCompleteGraph& g, const SequenceSpec& spec,
                              std::int64_t node_budget, int n_cap) {
    if (g.n() < 1) throw PreconditionError("exact_min_tiling: empty host");
    if (g.n() > n_cap || g.n() > 20)
        throw PreconditionError("exact_min_tiling: n exceeds the oracle cap");
    if (node_budget < 1) throw PreconditionError("exact_min_tiling: need a positive budget");

    OracleResult res;
    res.instance_digest = g.digest();
    res.tiling.n = g.n();
    res.tiling.spec = spec;

    OracleSearch search(g, spec, node_budget);
    std::uint32_t full = g.n() == 32 ? ~0u : ((std::uint32_t{1} << g.n()) - 1);
    int best = search.solve(full);
    res.nodes = search.nodes;
    if (search.exhausted) {
        // Upper bound only: greedy member cover plus singletons.
        res.optimal = false;
        GreedyCoverResult cov = greedy_cover(g, VertexSet::full(g.n()), spec, 1, 0);
        res.tiling.tiles = std::move(cov.tiles);
        cov.residual.for_each([&](int v) {
            res.tiling.tiles.push_back(Embedding{1, kSingletonColour, {v}});
        });
        res.min_size = static_cast<int>(res.tiling.tiles.size());
        return res;
    }
    res.min_size = best;
    search.reconstruct(full, res.tiling);
    VerifyReport rep = verify_tiling(g, spec, res.tiling);
    if (!rep.pass)
        throw StageError("exact-oracle", "optimal tiling failed verification: "
                                             + rep.violations.front());
    if (static_cast<int>(res.tiling.tiles.size()) != best)
        throw StageError("exact-oracle", "reconstruction size mismatch");
    return res;
}

std::vector<SweepRow> exact_sweep(int n, int r, const SequenceSpec& spec, int sample_count,
                                  std::uint64_t seed, std::int64_t node_budget) {
    if (n < 1) throw PreconditionError("exact_sweep: need n >= 1");
    int pairs = n * (n - 1) / 2;
    bool enumerate = r == 2 && n <= 6 && sample_count == 0;
    if (!enumerate && sample_count < 1)
        throw PreconditionError(
            "exact_sweep: full enumeration needs r = 2 and n <= 6; give sample_count otherwise");

    std::vector<SweepRow> rows;
    if (enumerate) {
        std::uint64_t total = std::uint64_t{1} << pairs;
        for (std::uint64_t code = 0; code < total; ++code) {
            std::vector<int> colours(static_cast<std::size_t>(pairs));
            for (int i = 0; i < pairs; ++i)
                colours[static_cast<std::size_t>(i)] = static_cast<int>((code >> i) & 1u);
            ColouredCompleteGraph g(n, r, colours);
            OracleResult o = exact_min_tiling(g, spec, node_budget);
            rows.push_back(SweepRow{code, o.instance_digest, n, r, o.min_size, o.optimal});
        }
    } else {
        for (int s = 0; s < sample_count; ++s) {
            std::uint64_t inst_seed = SplitRng(seed).sub("sweep", s).seed();
            ColouredCompleteGraph g = ColouredCompleteGraph::uniform_random(n, r, inst_seed);
            OracleResult o = exact_min_tiling(g, spec, node_budget);
            rows.push_back(
                SweepRow{inst_seed, o.instance_digest, n, r, o.min_size, o.optimal});
        }
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, const SequenceSpec& spec) {
    std::ostringstream out;
    out << "instance,digest,n,r,spec,min_size,optimal\n";
    for (const auto& row : rows) {
        out << row.instance << ',' << row.digest << ',' << row.n << ',' << row.r << ','
            << spec.to_string() << ',' << row.min_size << ',' << (row.optimal ? 1 : 0)
            << '\n';
    }
    return out.str();
}

} // namespace monotile
