#include "monotile/hypergraph_embedding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "monotile/errors.hpp"
#include "monotile/rng.hpp"

namespace monotile {

namespace {

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double out = 1.0;
    for (int i = 1; i <= k; ++i)
        out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
    return out;
}

constexpr double kCountSlack = 1e-9;
constexpr std::size_t kIndexCap = 300'000;    // max bad sets kept for bucket queries
constexpr int kSupersetSamples = 20'000;

bool sorted_contains_all(const std::vector<int>& big, const std::vector<int>& small) {
    std::size_t i = 0;
    for (int v : small) {
        while (i < big.size() && big[i] < v) ++i;
        if (i == big.size() || big[i] != v) return false;
        ++i;
    }
    return true;
}

} // namespace

DownClosedHypergraph::DownClosedHypergraph(const ColouredCompleteGraph& g, const VertexSet& u,
                                           const VertexSet& v, int colour, double threshold,
                                           int delta, std::uint64_t exact_cap, std::uint64_t seed)
    : g_(&g), u_(u), v_(v), colour_(colour), threshold_(threshold), delta_(delta),
      exact_cap_(exact_cap), seed_(seed) {
    if (u.universe() != g.n() || v.universe() != g.n())
        throw PreconditionError("hypergraph sides must live on the host vertex set");
    if (colour < 0 || colour >= g.r())
        throw PreconditionError("hypergraph colour out of range");
    if (delta < 1) throw PreconditionError("hypergraph needs delta >= 1");
    if (threshold < 0.0) throw PreconditionError("hypergraph threshold must be >= 0");
    vertices_ = u_.to_vector();
}

bool DownClosedHypergraph::edge(const std::vector<int>& s) const {
    if (static_cast<int>(s.size()) > delta_)
        throw PreconditionError("edge query larger than delta");
    for (int x : s)
        if (x < 0 || x >= g_->n() || !u_.contains(x))
            throw PreconditionError("edge query vertex outside U");
    if (log_queries_) {
        std::vector<int> key = s;
        std::sort(key.begin(), key.end());
        queries_.push_back(std::move(key));
    }
    int common = g_->common_neighbourhood(s, colour_, v_).count();
    return static_cast<double>(common) + kCountSlack >= threshold_;
}

void DownClosedHypergraph::build_census() const {
    if (census_built_) return;
    census_built_ = true;
    int n = static_cast<int>(vertices_.size());
    stats_.total = binom(n, delta_);
    stats_.bad = 0.0;
    stats_.exact = true;
    if (stats_.total <= 0.5) return;

    if (stats_.total <= static_cast<double>(exact_cap_)) {
        // Exact enumeration with prefix-shared intersections.  Once a prefix
        // is already below threshold every completion is bad (down-closed),
        // so the intersection work stops there.
        std::vector<int> chosen;
        chosen.reserve(static_cast<std::size_t>(delta_));
        bool index_ok = true;
        auto record_bad = [&](const std::vector<int>& s) {
            stats_.bad += 1.0;
            if (!index_ok) return;
            if (bad_sets_.size() >= kIndexCap) {
                index_ok = false;
                bad_sets_.clear();
                bad_bucket_.clear();
                return;
            }
            bad_sets_.push_back(s);
        };
        // rec over start index; `common` is the neighbourhood of the prefix.
        auto rec = [&](auto&& self, int start, const VertexSet& common, bool dead) -> void {
            if (static_cast<int>(chosen.size()) == delta_) {
                bool is_edge = !dead
                    && static_cast<double>(common.count()) + kCountSlack >= threshold_;
                if (!is_edge) record_bad(chosen);
                return;
            }
            int remaining = delta_ - static_cast<int>(chosen.size());
            for (int i = start; i + remaining <= n; ++i) {
                chosen.push_back(vertices_[static_cast<std::size_t>(i)]);
                if (dead) {
                    self(self, i + 1, common, true);
                } else {
                    VertexSet next = common & g_->neighbours(colour_, vertices_[static_cast<std::size_t>(i)]);
                    next.erase(vertices_[static_cast<std::size_t>(i)]);
                    bool now_dead =
                        static_cast<double>(next.count()) + kCountSlack < threshold_;
                    self(self, i + 1, next, now_dead);
                }
                chosen.pop_back();
            }
        };
        rec(rec, 0, v_, false);
        if (index_ok) {
            for (std::size_t id = 0; id < bad_sets_.size(); ++id)
                for (int x : bad_sets_[id]) bad_bucket_[x].push_back(static_cast<int>(id));
        }
        return;
    }

    // Sampled census.
    stats_.exact = false;
    SplitRng rng = SplitRng(seed_).sub("hypergraph/census");
    int trials = kSupersetSamples;
    int bad = 0;
    std::vector<int> s(static_cast<std::size_t>(delta_));
    for (int t = 0; t < trials; ++t) {
        std::vector<int> idx = rng.sample_without_replacement(n, delta_);
        for (int j = 0; j < delta_; ++j)
            s[static_cast<std::size_t>(j)] = vertices_[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
        int common = g_->common_neighbourhood(s, colour_, v_).count();
        if (static_cast<double>(common) + kCountSlack < threshold_) ++bad;
    }
    stats_.bad = stats_.total * static_cast<double>(bad) / static_cast<double>(trials);
}

const DownClosedHypergraph::DeltaStats& DownClosedHypergraph::delta_stats() const {
    build_census();
    return stats_;
}

double DownClosedHypergraph::bad_supersets(const std::vector<int>& s) const {
    build_census();
    int q = static_cast<int>(s.size());
    if (q > delta_) throw PreconditionError("superset query larger than delta");
    std::vector<int> key = s;
    std::sort(key.begin(), key.end());
    for (std::size_t i = 0; i < key.size(); ++i) {
        if (key[i] < 0 || key[i] >= g_->n() || !u_.contains(key[i]))
            throw PreconditionError("superset query vertex outside U");
        if (i > 0 && key[i] == key[i - 1])
            throw PreconditionError("superset query vertices must be distinct");
    }
    if (q == 0) return stats_.bad;
    int n = static_cast<int>(vertices_.size());

    if (stats_.exact && !bad_sets_.empty() && !bad_bucket_.empty()) {
        // Scan the smallest bucket among the queried vertices.
        const std::vector<int>* bucket = nullptr;
        for (int x : key) {
            auto it = bad_bucket_.find(x);
            if (it == bad_bucket_.end()) return 0.0;
            if (bucket == nullptr || it->second.size() < bucket->size()) bucket = &it->second;
        }
        double hits = 0.0;
        for (int id : *bucket)
            if (sorted_contains_all(bad_sets_[static_cast<std::size_t>(id)], key)) hits += 1.0;
        return hits;
    }

    if (stats_.exact) {
        // Exact but unindexed (either no bad sets at all or too many to store):
        // enumerate extensions of s directly, with the same down-closed prune.
        VertexSet base = g_->common_neighbourhood(key, colour_, v_);
        if (static_cast<double>(base.count()) + kCountSlack < threshold_)
            return binom(n - q, delta_ - q);
        std::vector<int> pool;
        pool.reserve(static_cast<std::size_t>(n));
        for (int x : vertices_)
            if (!std::binary_search(key.begin(), key.end(), x)) pool.push_back(x);
        double bad = 0.0;
        int need = delta_ - q;
        auto rec = [&](auto&& self, int start, int picked, const VertexSet& common,
                       bool dead) -> void {
            if (picked == need) {
                if (dead || static_cast<double>(common.count()) + kCountSlack < threshold_)
                    bad += 1.0;
                return;
            }
            int pn = static_cast<int>(pool.size());
            for (int i = start; i + (need - picked) <= pn; ++i) {
                if (dead) {
                    self(self, i + 1, picked + 1, common, true);
                    continue;
                }
                VertexSet next = common & g_->neighbours(colour_, pool[static_cast<std::size_t>(i)]);
                next.erase(pool[static_cast<std::size_t>(i)]);
                bool now_dead = static_cast<double>(next.count()) + kCountSlack < threshold_;
                self(self, i + 1, picked + 1, next, now_dead);
            }
        };
        rec(rec, 0, 0, base, false);
        return bad;
    }

    // Sampled estimate over random extensions.
    std::uint64_t h = seed_;
    for (int x : key) h = fnv1a64_mix(h, static_cast<std::uint64_t>(x) + 1);
    SplitRng rng = SplitRng(h).sub("hypergraph/supersets");
    std::vector<int> pool;
    for (int x : vertices_)
        if (!std::binary_search(key.begin(), key.end(), x)) pool.push_back(x);
    int need = delta_ - q;
    double total = binom(n - q, need);
    if (total <= 0.5) return 0.0;
    if (need == 0)
        return edge(key) ? 0.0 : 1.0;
    int bad = 0;
    std::vector<int> probe;
    for (int t = 0; t < kSupersetSamples; ++t) {
        probe = key;
        std::vector<int> idx =
            rng.sample_without_replacement(static_cast<int>(pool.size()), need);
        for (int j : idx) probe.push_back(pool[static_cast<std::size_t>(j)]);
        int common = g_->common_neighbourhood(probe, colour_, v_).count();
        if (static_cast<double>(common) + kCountSlack < threshold_) ++bad;
    }
    return total * static_cast<double>(bad) / static_cast<double>(kSupersetSamples);
}

RichSetOracle::RichSetOracle(const DownClosedHypergraph& g, double lambda)
    : g_(&g), lambda_(lambda) {
    if (!(lambda > 0.0) || lambda >= 1.0)
        throw PreconditionError("richness needs lambda in (0, 1)");
}

RichSetOracle::Classification RichSetOracle::classify(std::vector<int> s) const {
    std::sort(s.begin(), s.end());
    auto it = memo_.find(s);
    if (it != memo_.end()) return it->second;
    int q = static_cast<int>(s.size());
    if (q > g_->delta()) throw PreconditionError("richness query larger than delta");
    Classification out;
    out.bad_supersets = g_->bad_supersets(s);
    out.exact = g_->counts_exact();
    out.allowance = std::pow(lambda_, g_->delta() - q)
        * binom(g_->vertex_count() - q, g_->delta() - q);
    out.rich = out.bad_supersets < out.allowance;
    memo_.emplace(std::move(s), out);
    return out;
}

HEmbedResult embed_hypergraph(const DerivedMultiHypergraph& h, const DownClosedHypergraph& g,
                              double lambda, std::uint64_t seed, bool check_preconditions) {
    RichSetOracle oracle(g, lambda);
    return embed_hypergraph(h, oracle, seed, check_preconditions);
}

HEmbedResult embed_hypergraph(const DerivedMultiHypergraph& h, const RichSetOracle& oracle,
                              std::uint64_t seed, bool check_preconditions) {
    const DownClosedHypergraph& g = oracle.hypergraph();
    int n = g.vertex_count();
    int delta = g.delta();
    for (const auto& e : h.edges)
        if (static_cast<int>(e.size()) > delta)
            throw PreconditionError("hyperedge larger than the host delta");
    if (check_preconditions) {
        if (2 * h.m > n)
            throw PreconditionError("embedding needs |V(H)| <= |V(G)|/2");
        if (!(oracle.lambda() < 1.0 / (2.0 * static_cast<double>(delta))))
            throw PreconditionError("embedding needs lambda < 1/(2 delta)");
        const auto& stats = g.delta_stats();
        if (stats.total > 0.5
            && stats.bad > std::pow(oracle.lambda(), delta) * stats.total + kCountSlack)
            throw PreconditionError("host has more than lambda^delta bad delta-sets");
    }

    // edges touching each H vertex, so step j only re-checks what changed.
    std::vector<std::vector<int>> at(static_cast<std::size_t>(std::max(h.m, 0)));
    for (std::size_t j = 0; j < h.edges.size(); ++j)
        for (int x : h.edges[j]) at[static_cast<std::size_t>(x)].push_back(static_cast<int>(j));

    HEmbedResult res;
    res.map.assign(static_cast<std::size_t>(std::max(h.m, 0)), -1);
    std::vector<char> used(static_cast<std::size_t>(g.host().n()), 0);
    SplitRng rng = SplitRng(seed).sub("hypergraph/embed");
    std::vector<int> candidates = g.vertices();

    for (int v = 0; v < h.m; ++v) {
        rng.shuffle(candidates);
        int picked = -1;
        for (int u : candidates) {
            if (used[static_cast<std::size_t>(u)]) continue;
            bool ok = true;
            for (int e : at[static_cast<std::size_t>(v)]) {
                std::vector<int> img;
                for (int x : h.edges[static_cast<std::size_t>(e)]) {
                    if (x < v) img.push_back(res.map[static_cast<std::size_t>(x)]);
                    else if (x == v) img.push_back(u);
                }
                ++res.rich_queries;
                if (!oracle.is_rich(img)) { ok = false; break; }
            }
            if (ok) { picked = u; break; }
        }
        if (picked < 0) {
            if (!at[static_cast<std::size_t>(v)].empty()) {
                int e = at[static_cast<std::size_t>(v)].front();
                for (int x : h.edges[static_cast<std::size_t>(e)])
                    if (x < v) res.stuck_prefix.push_back(res.map[static_cast<std::size_t>(x)]);
            }
            res.ok = false;
            return res;
        }
        res.map[static_cast<std::size_t>(v)] = picked;
        used[static_cast<std::size_t>(picked)] = 1;
    }
    res.ok = true;
    return res;
}

std::int64_t count_edges_in(const DerivedMultiHypergraph& h, const std::vector<int>& map,
                            const VertexSet& r) {
    if (static_cast<int>(map.size()) != h.m)
        throw PreconditionError("map size must equal the hypergraph order");
    std::int64_t count = 0;
    for (const auto& e : h.edges) {
        bool inside = true;
        for (int x : e) {
            int host = map[static_cast<std::size_t>(x)];
            if (host < 0 || host >= r.universe() || !r.contains(host)) { inside = false; break; }
        }
        if (inside) ++count;
    }
    return count;
}

CarefulEmbedResult embed_carefully(const DerivedMultiHypergraph& h, const DownClosedHypergraph& g,
                                   double lambda, int r, const std::vector<VertexSet>& constraints,
                                   std::uint64_t seed, int max_retries, bool check_preconditions,
                                   bool best_effort) {
    if (r < 1) throw PreconditionError("embed_carefully needs r >= 1");
    if (max_retries < 1) throw PreconditionError("embed_carefully needs max_retries >= 1");
    int n_host = g.host().n();
    for (const auto& c : constraints)
        if (c.universe() != n_host)
            throw PreconditionError("constraint sets must live on the host vertex set");

    int delta = g.delta();
    double demand = static_cast<double>(h.edge_count())
        / (static_cast<double>(delta) * static_cast<double>(delta)
           * std::pow(32.0 * static_cast<double>(r), delta));

    if (check_preconditions) {
        if (n_host < 16 * r * h.m)
            throw PreconditionError("embed_carefully needs n >= 16 r m");
        for (const auto& c : constraints)
            if (static_cast<double>(c.count()) + kCountSlack
                < static_cast<double>(n_host) / (8.0 * static_cast<double>(r)))
                throw PreconditionError("embed_carefully needs every |R_i| >= n/(8r)");
        double cap = lambda * static_cast<double>(std::max(h.m, 1));
        if (std::log(static_cast<double>(std::max<std::size_t>(constraints.size(), 1))) > cap + kCountSlack)
            throw PreconditionError("embed_carefully allows at most exp(lambda m) constraints");
    }

    RichSetOracle oracle(g, lambda);
    SplitRng rng(seed);
    double best_ratio = -1.0;
    int worst_constraint = -1;
    std::int64_t worst_count = 0;
    CarefulEmbedResult best;
    best.satisfied = -1;
    for (int attempt = 1; attempt <= max_retries; ++attempt) {
        HEmbedResult emb = embed_hypergraph(h, oracle, rng.sub("careful", static_cast<std::uint64_t>(attempt)).seed(),
                                            check_preconditions && attempt == 1);
        if (!emb.ok) continue;
        CarefulEmbedResult out;
        out.map = emb.map;
        out.demand = demand;
        out.attempts = attempt;
        out.constraint_counts.reserve(constraints.size());
        bool all_ok = true;
        int starved = -1;
        std::int64_t starved_count = 0;
        for (std::size_t i = 0; i < constraints.size(); ++i) {
            std::int64_t c = count_edges_in(h, emb.map, constraints[i]);
            out.constraint_counts.push_back(c);
            if (static_cast<double>(c) + kCountSlack < demand) {
                if (all_ok) {
                    all_ok = false;
                    starved = static_cast<int>(i);
                    starved_count = c;
                }
            } else {
                ++out.satisfied;
            }
        }
        if (all_ok) return out;
        if (out.satisfied > best.satisfied) best = out;
        double ratio = demand > 0.0 ? static_cast<double>(starved_count) / demand : 1.0;
        if (ratio > best_ratio) {
            best_ratio = ratio;
            worst_constraint = starved;
            worst_count = starved_count;
        }
    }
    if (best_effort && best.satisfied >= 0) return best;
    throw RetryExhausted(
        worst_constraint < 0
            ? std::string("embed_carefully: no embedding attempt succeeded")
            : "embed_carefully: constraint " + std::to_string(worst_constraint) + " starved ("
                  + std::to_string(worst_count) + " < " + std::to_string(demand) + ") after "
                  + std::to_string(max_retries) + " attempts",
        max_retries);
}

} // namespace monotile
