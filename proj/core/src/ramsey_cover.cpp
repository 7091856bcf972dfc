#include "monotile/ramsey_cover.hpp"

#include <algorithm>
#include <cmath>

#include "monotile/drc.hpp"
#include "monotile/errors.hpp"
#include "monotile/rng.hpp"

namespace monotile {

double density_member_threshold(int delta, double eps, int k) {
    if (delta < 1 || !(eps > 0.0) || eps > 1.0 || k < 0)
        throw PreconditionError("density_member_threshold: need delta >= 1, eps in (0,1], k >= 0");
    return 32.0 * static_cast<double>(delta) * std::pow(1.0 / eps, delta)
        * static_cast<double>(k);
}

double mono_member_threshold(int delta, int r, int k) {
    if (delta < 1 || r < 1 || k < 0)
        throw PreconditionError("mono_member_threshold: need delta >= 1, r >= 1, k >= 0");
    return 32.0 * static_cast<double>(delta) * std::pow(static_cast<double>(r), delta)
        * static_cast<double>(k);
}

double greedy_cover_bound(int delta, int r, double s, double t) {
    if (delta < 1 || r < 1 || !(t >= 1.0) || s < 0.0)
        throw PreconditionError("greedy_cover_bound: need delta >= 1, r >= 1, t >= 1");
    double ratio = s > t ? s / t : 1.0;
    return 64.0 * static_cast<double>(delta) * std::pow(static_cast<double>(r), delta)
        * (std::log(ratio) + 2.0);
}

namespace {

// BFS placement order: each vertex after the first of its component has at
// least one already-placed neighbour constraining its candidates.
struct PlacementPlan {
    std::vector<int> order;                // step -> member vertex
    std::vector<std::vector<int>> preds;   // step -> earlier steps adjacent to it
};

PlacementPlan plan_placement(const BipartiteMember& m) {
    auto adj = m.adjacency();
    PlacementPlan plan;
    plan.order.reserve(static_cast<std::size_t>(m.order));
    std::vector<int> pos(static_cast<std::size_t>(m.order), -1);
    std::vector<int> queue;
    for (int start = 0; start < m.order; ++start) {
        if (pos[static_cast<std::size_t>(start)] >= 0) continue;
        queue.clear();
        queue.push_back(start);
        pos[static_cast<std::size_t>(start)] = static_cast<int>(plan.order.size());
        plan.order.push_back(start);
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            for (int w : adj[static_cast<std::size_t>(queue[qi])]) {
                if (pos[static_cast<std::size_t>(w)] >= 0) continue;
                pos[static_cast<std::size_t>(w)] = static_cast<int>(plan.order.size());
                plan.order.push_back(w);
                queue.push_back(w);
            }
        }
    }
    plan.preds.resize(plan.order.size());
    for (std::size_t step = 0; step < plan.order.size(); ++step)
        for (int w : adj[static_cast<std::size_t>(plan.order[step])]) {
            int p = pos[static_cast<std::size_t>(w)];
            if (p < static_cast<int>(step)) plan.preds[step].push_back(p);
        }
    return plan;
}

} // namespace

std::optional<Embedding> embed_member_backtracking(const ColouredCompleteGraph& g,
                                                   const VertexSet& within,
                                                   const SequenceSpec& spec, int k, int colour,
                                                   std::int64_t node_budget,
                                                   EmbedSearchStats* stats) {
    if (k < 1) throw PreconditionError("embed_member_backtracking: need k >= 1");
    if (colour < 0 || colour >= g.r())
        throw PreconditionError("embed_member_backtracking: colour out of range");
    if (within.universe() != g.n())
        throw PreconditionError("embed_member_backtracking: within must live on the host");
    EmbedSearchStats local;
    EmbedSearchStats& st = stats != nullptr ? *stats : local;
    if (within.count() < k) return std::nullopt;

    BipartiteMember m = member(spec, k);
    if (k == 1) {
        Embedding emb;
        emb.order = 1;
        emb.colour = kSingletonColour;
        emb.vertices = {within.first()};
        return emb;
    }
    PlacementPlan plan = plan_placement(m);

    std::vector<int> host(static_cast<std::size_t>(k), -1); // step -> host vertex
    VertexSet used(g.n());
    bool aborted = false;

    auto dfs = [&](auto&& self, int step) -> bool {
        if (step == k) return true;
        VertexSet cand = within;
        cand -= used;
        for (int p : plan.preds[static_cast<std::size_t>(step)])
            cand &= g.neighbours(colour, host[static_cast<std::size_t>(p)]);
        for (int v = cand.first(); v >= 0; v = cand.next(v)) {
            if (++st.nodes > node_budget) {
                st.budget_hit = true;
                aborted = true;
                return false;
            }
            host[static_cast<std::size_t>(step)] = v;
            used.insert(v);
            if (self(self, step + 1)) return true;
            used.erase(v);
            if (aborted) return false;
        }
        return false;
    };

    if (!dfs(dfs, 0)) return std::nullopt;
    Embedding emb;
    emb.order = k;
    emb.colour = colour;
    emb.vertices.assign(static_cast<std::size_t>(k), -1);
    for (int step = 0; step < k; ++step)
        emb.vertices[static_cast<std::size_t>(plan.order[static_cast<std::size_t>(step)])] =
            host[static_cast<std::size_t>(step)];
    return emb;
}

namespace {

std::vector<int> colours_by_weight(const ColouredCompleteGraph& g, const VertexSet& within) {
    std::vector<std::int64_t> hist = g.colour_histogram(within);
    std::vector<int> order(static_cast<std::size_t>(g.r()));
    for (int c = 0; c < g.r(); ++c) order[static_cast<std::size_t>(c)] = c;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return hist[static_cast<std::size_t>(a)] > hist[static_cast<std::size_t>(b)];
    });
    return order;
}

constexpr int kPhaseOneCandidateCap = 200;

// Two-phase embedding: DRC picks S so that almost all Delta-sets of S keep a
// large common neighbourhood; X' goes into S keeping every partial hyperedge
// image above the co-degree demand, then each Y' vertex lands in the common
// neighbourhood of its hyperedge's image.
std::optional<MonoCopyResult> drc_two_phase(const ColouredCompleteGraph& g,
                                            const VertexSet& within, const SequenceSpec& spec,
                                            int k, int colour, bool dense_mode, double eps,
                                            std::uint64_t seed, const MonoCopyOptions& opts) {
    std::vector<int> hosts = within.to_vector();
    int nw = static_cast<int>(hosts.size());
    if (nw < k) return std::nullopt;
    BipartiteGraph bip = BipartiteGraph::colour_class(g, hosts, hosts, colour);
    BipartiteMember m = member(spec, k);
    DerivedMultiHypergraph h = derive_hypergraph(m);
    int delta = spec.delta_bound();

    DrcResult drc;
    try {
        if (dense_mode) {
            DrcParams p;
            p.k = delta;
            p.t = 4;
            p.epsilon = eps;
            p.delta = 0.25;
            p.gamma = std::pow(eps, delta) / 2.0;
            p.seed = SplitRng(seed).sub("dense-copy/drc").seed();
            p.max_retries = 64;
            p.check_density = true;
            drc = dependent_random_choice(bip, p);
        } else {
            // Majority-colour density on ordered pairs is (n-1)/(n r); skip the
            // strict 1/r precheck and let the contract re-check do the work.
            drc = k_set_drc(bip, g.r(), delta, 0.25,
                            SplitRng(seed).sub("mono-copy/drc").seed(), 64,
                            /*check_density=*/false);
        }
    } catch (const RetryExhausted&) {
        return std::nullopt;
    }

    double gamma = dense_mode ? std::pow(eps, delta) / 2.0
                              : std::pow(1.0 / static_cast<double>(g.r()), delta) / 2.0;
    double demand = gamma * static_cast<double>(nw);
    std::vector<int> s_hosts;
    drc.s.for_each([&](int a) { s_hosts.push_back(hosts[static_cast<std::size_t>(a)]); });

    SplitRng rng = SplitRng(seed).sub("mono-copy/greedy");
    for (int attempt = 0; attempt < std::max(opts.max_retries, 1); ++attempt) {
        SplitRng arng = rng.sub("attempt", static_cast<std::uint64_t>(attempt));
        std::vector<int> cands = s_hosts;
        arng.shuffle(cands);
        VertexSet used(g.n());
        std::vector<int> ximg(static_cast<std::size_t>(h.m), -1);
        bool ok = true;

        // Phase 1: X' into S, every partial hyperedge image above the demand.
        for (int v = 0; v < h.m && ok; ++v) {
            int picked = -1;
            int scanned = 0;
            for (int u : cands) {
                if (used.contains(u)) continue;
                if (++scanned > kPhaseOneCandidateCap) break;
                bool fits = true;
                for (const auto& e : h.edges) {
                    std::vector<int> img;
                    bool involves = false;
                    for (int x : e) {
                        if (x < v) img.push_back(ximg[static_cast<std::size_t>(x)]);
                        else if (x == v) { img.push_back(u); involves = true; }
                    }
                    if (!involves) continue;
                    VertexSet common = g.common_neighbourhood(img, colour, within);
                    if (static_cast<double>(common.count()) < demand) { fits = false; break; }
                }
                if (fits) { picked = u; break; }
            }
            if (picked < 0) { ok = false; break; }
            ximg[static_cast<std::size_t>(v)] = picked;
            used.insert(picked);
        }
        if (!ok) continue;

        // Phase 2: each Y' vertex into the common neighbourhood of its image.
        std::vector<int> yimg(h.edges.size(), -1);
        for (std::size_t j = 0; j < h.edges.size() && ok; ++j) {
            std::vector<int> img;
            for (int x : h.edges[j]) img.push_back(ximg[static_cast<std::size_t>(x)]);
            VertexSet room = g.common_neighbourhood(img, colour, within);
            room -= used;
            int v = room.first();
            if (v < 0) { ok = false; break; }
            yimg[j] = v;
            used.insert(v);
        }
        if (!ok) continue;

        Embedding emb;
        emb.order = k;
        emb.colour = colour;
        emb.vertices.assign(static_cast<std::size_t>(k), -1);
        for (int i = 0; i < h.m; ++i)
            emb.vertices[static_cast<std::size_t>(h.x_vertices[static_cast<std::size_t>(i)])] =
                ximg[static_cast<std::size_t>(i)];
        for (std::size_t j = 0; j < h.edges.size(); ++j)
            emb.vertices[static_cast<std::size_t>(h.y_vertices[j])] = yimg[j];
        VerifyReport rep = verify_embedding(g, spec, emb);
        if (!rep.pass)
            throw StageError("drc-embed", "two-phase embedding produced an invalid copy: "
                                              + rep.violations.front());
        MonoCopyResult out;
        out.embedding = std::move(emb);
        out.strategy = "drc";
        out.drc_witness_size = drc.s.count();
        out.drc_retries = drc.retries;
        return out;
    }
    return std::nullopt;
}

std::optional<MonoCopyResult> mono_copy_impl(const ColouredCompleteGraph& g,
                                             const VertexSet& within, const SequenceSpec& spec,
                                             int k, std::uint64_t seed,
                                             const MonoCopyOptions& opts,
                                             const std::vector<int>& colour_order,
                                             bool dense_mode, double eps) {
    if (k < 1) throw PreconditionError("find_mono_copy: need k >= 1");
    if (within.universe() != g.n())
        throw PreconditionError("find_mono_copy: within must live on the host");
    if (within.count() < k) return std::nullopt;

    if (k == 1) {
        MonoCopyResult out;
        out.embedding.order = 1;
        out.embedding.colour = kSingletonColour;
        out.embedding.vertices = {within.first()};
        out.strategy = "singleton";
        return out;
    }

    std::int64_t nodes_total = 0;
    if (opts.strategy != MonoStrategy::drc_guided) {
        int rounds = opts.strategy == MonoStrategy::automatic ? 3 : 1;
        std::int64_t budget = std::max<std::int64_t>(opts.node_budget, 1);
        for (int round = 0; round < rounds; ++round) {
            for (int colour : colour_order) {
                EmbedSearchStats st;
                auto emb = embed_member_backtracking(g, within, spec, k, colour, budget, &st);
                nodes_total += st.nodes;
                if (emb) {
                    MonoCopyResult out;
                    out.embedding = std::move(*emb);
                    out.strategy = "backtrack";
                    out.nodes = nodes_total;
                    return out;
                }
            }
            budget *= 8;
        }
        if (opts.strategy == MonoStrategy::backtrack) return std::nullopt;
    }

    for (int colour : colour_order) {
        auto res = drc_two_phase(g, within, spec, k, colour, dense_mode, eps,
                                 SplitRng(seed).sub("mono-copy/colour",
                                                    static_cast<std::uint64_t>(colour))
                                     .seed(),
                                 opts);
        if (res) {
            res->nodes = nodes_total;
            return res;
        }
    }
    return std::nullopt;
}

} // namespace

std::optional<MonoCopyResult> find_mono_copy(const ColouredCompleteGraph& g,
                                             const VertexSet& within, const SequenceSpec& spec,
                                             int k, std::uint64_t seed,
                                             const MonoCopyOptions& opts) {
    return mono_copy_impl(g, within, spec, k, seed, opts, colours_by_weight(g, within),
                          /*dense_mode=*/false, 0.0);
}

std::optional<MonoCopyResult> find_dense_copy(const ColouredCompleteGraph& g,
                                              const VertexSet& within, int colour, double eps,
                                              const SequenceSpec& spec, int k,
                                              std::uint64_t seed, const MonoCopyOptions& opts) {
    if (colour < 0 || colour >= g.r())
        throw PreconditionError("find_dense_copy: colour out of range");
    if (!(eps > 0.0) || eps > 1.0)
        throw PreconditionError("find_dense_copy: need eps in (0, 1]");
    return mono_copy_impl(g, within, spec, k, seed, opts, std::vector<int>{colour},
                          /*dense_mode=*/true, eps);
}

GreedyCoverResult greedy_cover(const ColouredCompleteGraph& g, const VertexSet& within,
                               const SequenceSpec& spec, int t_target, std::uint64_t seed,
                               const MonoCopyOptions& opts) {
    if (t_target < 1) throw PreconditionError("greedy_cover: need t_target >= 1");
    if (within.universe() != g.n())
        throw PreconditionError("greedy_cover: within must live on the host");

    int delta = spec.delta_bound();
    double member_threshold = 32.0 * static_cast<double>(delta)
        * std::pow(static_cast<double>(g.r()), delta);

    GreedyCoverResult out;
    out.bound = greedy_cover_bound(delta, g.r(), static_cast<double>(within.count()),
                                   static_cast<double>(t_target));
    VertexSet rem = within;
    SplitRng rng(seed);
    // With t > 1 the residual must end strictly below t; t == 1 may leave one.
    int stop = t_target > 1 ? t_target - 1 : 1;
    for (std::uint64_t step = 0; rem.count() > stop; ++step) {
        int s_i = rem.count();
        int ell_guar = static_cast<int>(static_cast<double>(s_i) / member_threshold + 1e-12);
        // Orders to attempt, largest first.  Any s_i vertices contain a
        // monochromatic member of order ell_guar, which gets the caller's
        // full search budget; hosts below the 32*Delta*r^Delta threshold
        // guarantee nothing, so a halving ladder of larger orders runs
        // opportunistically on a small budget.  Bigger tiles only sharpen
        // the count, and order 2 is a bare edge, which always embeds.
        std::vector<int> orders;
        for (int k = std::min(s_i, 128); k >= 2; k /= 2) orders.push_back(k);
        if (ell_guar >= 2 && std::find(orders.begin(), orders.end(), ell_guar) == orders.end()) {
            orders.push_back(ell_guar);
            std::sort(orders.begin(), orders.end(), std::greater<int>());
        }
        SplitRng srng = rng.sub("cover", step);
        bool covered = false;
        for (int k : orders) {
            MonoCopyOptions attempt = opts;
            if (k != ell_guar) {
                attempt.node_budget = std::min<std::int64_t>(opts.node_budget, 30'000);
                attempt.max_retries = std::min(opts.max_retries, 2);
            }
            auto res = find_mono_copy(g, rem, spec, k, srng.sub("k", k).seed(), attempt);
            if (!res) continue;
            for (int v : res->embedding.vertices) rem.erase(v);
            out.tiles.push_back(std::move(res->embedding));
            covered = true;
            break;
        }
        if (covered) continue;
        int v = rem.first();
        Embedding single;
        single.order = 1;
        single.colour = kSingletonColour;
        single.vertices = {v};
        out.tiles.push_back(std::move(single));
        rem.erase(v);
        ++out.singleton_tiles;
    }
    out.residual = rem;
    return out;
}

} // namespace monotile
