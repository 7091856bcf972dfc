#include "monotile/absorption.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "monotile/drc.hpp"
#include "monotile/errors.hpp"
#include "monotile/hypergraph_embedding.hpp"
#include "monotile/ramsey_cover.hpp"
#include "monotile/rng.hpp"

namespace monotile {

namespace {
constexpr double kTol = 1e-9;
}

double good_theta(int delta, int r) {
    if (delta < 1 || r < 1) throw PreconditionError("good_theta: need delta >= 1 and r >= 1");
    return 1.0
        / (2.0 * static_cast<double>(delta) * static_cast<double>(delta)
           * std::pow(32.0 * static_cast<double>(r), delta));
}

std::vector<int> GoodSubgraphWitness::x_hosts() const {
    std::vector<int> out;
    out.reserve(x_member.size());
    for (int v : x_member) out.push_back(f.vertices[static_cast<std::size_t>(v)]);
    return out;
}

std::vector<int> GoodSubgraphWitness::y_hosts() const {
    std::vector<int> out;
    out.reserve(y_member.size());
    for (int v : y_member) out.push_back(f.vertices[static_cast<std::size_t>(v)]);
    return out;
}

VertexSet GoodSubgraphWitness::host_set(int n) const {
    VertexSet s(n);
    for (int v : f.vertices) s.insert(v);
    return s;
}

SwitchRelation::SwitchRelation(const ColouredCompleteGraph& g, int colour,
                               std::map<int, VertexSet> nf)
    : g_(&g), colour_(colour), nf_(std::move(nf)) {
    if (colour < 0 || colour >= g.r())
        throw PreconditionError("switch relation colour out of range");
    for (const auto& [y, s] : nf_)
        if (y < 0 || y >= g.n() || s.universe() != g.n())
            throw PreconditionError("switch relation nf sets must live on the host");
}

SwitchRelation SwitchRelation::from_witness(const ColouredCompleteGraph& g,
                                            const GoodSubgraphWitness& w) {
    BipartiteMember m = member(w.spec, w.f.order);
    auto adj = m.adjacency();
    std::map<int, VertexSet> nf;
    for (int ym : w.y_member) {
        int host = w.f.vertices[static_cast<std::size_t>(ym)];
        VertexSet s(g.n());
        for (int xm : adj[static_cast<std::size_t>(ym)])
            s.insert(w.f.vertices[static_cast<std::size_t>(xm)]);
        nf.emplace(host, std::move(s));
    }
    return SwitchRelation(g, w.colour, std::move(nf));
}

bool SwitchRelation::related(int y_host, int v_host) const {
    auto it = nf_.find(y_host);
    if (it == nf_.end())
        throw PreconditionError("switch relation queried on a vertex outside Y");
    if (v_host < 0 || v_host >= g_->n())
        throw PreconditionError("switch relation target outside the host");
    return it->second.is_subset_of(g_->neighbours(colour_, v_host));
}

const VertexSet& SwitchRelation::nf(int y_host) const {
    auto it = nf_.find(y_host);
    if (it == nf_.end())
        throw PreconditionError("switch relation queried on a vertex outside Y");
    return it->second;
}

int count_disjoint_chains(const SwitchRelation& rel, const std::vector<int>& pool, int x,
                          int y, const VertexSet* exclude,
                          std::vector<std::pair<int, int>>* out) {
    std::set<int> used;
    int count = 0;
    for (int z : pool) {
        if (z == x || z == y || used.count(z) != 0) continue;
        if (exclude != nullptr && exclude->contains(z)) continue;
        if (!rel.related(x, z)) continue;
        for (int w : pool) {
            if (w == z || w == x || w == y || used.count(w) != 0) continue;
            if (exclude != nullptr && exclude->contains(w)) continue;
            if (!rel.related(z, w) || !rel.related(w, y)) continue;
            used.insert(z);
            used.insert(w);
            ++count;
            if (out != nullptr) out->emplace_back(z, w);
            break;
        }
    }
    return count;
}

namespace {

// Minimum over checked ordered pairs of (packed chains) / |Y_i|; pair
// selection is exact below the cap and seeded-sampled above it.  Shared by
// verify_good and the witness assembly so "achieved eta" is by definition
// what verification measures.
double measure_chain_eta(const SwitchRelation& rel, const std::vector<std::vector<int>>& parts,
                         const VerifyGoodOptions& opts, VerifyReport* rep, double need_eta) {
    double min_ratio = 1.0;
    for (std::size_t pi = 0; pi < parts.size(); ++pi) {
        const auto& pool = parts[pi];
        int p = static_cast<int>(pool.size());
        if (p < 2) continue;
        std::vector<std::pair<int, int>> pairs;
        if (p <= opts.pair_exact_cap) {
            for (int i = 0; i < p; ++i)
                for (int j = 0; j < p; ++j)
                    if (i != j) pairs.emplace_back(pool[static_cast<std::size_t>(i)],
                                                   pool[static_cast<std::size_t>(j)]);
        } else {
            SplitRng rng = SplitRng(opts.seed).sub("verify-good/pairs", pi);
            for (int s = 0; s < opts.sampled_pairs; ++s) {
                int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(p)));
                int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(p - 1)));
                if (j >= i) ++j;
                pairs.emplace_back(pool[static_cast<std::size_t>(i)],
                                   pool[static_cast<std::size_t>(j)]);
            }
        }
        for (auto [x, y] : pairs) {
            int chains = count_disjoint_chains(rel, pool, x, y);
            double ratio = static_cast<double>(chains) / static_cast<double>(p);
            min_ratio = std::min(min_ratio, ratio);
            if (rep != nullptr && ratio + kTol < need_eta) {
                rep->fail("part " + std::to_string(pi) + ": pair (" + std::to_string(x) + ", "
                          + std::to_string(y) + ") has " + std::to_string(chains)
                          + " disjoint chains, below eta|Y_i|");
                return min_ratio; // first violation is enough
            }
        }
    }
    return min_ratio;
}

} // namespace

VerifyReport verify_good(const ColouredCompleteGraph& g, const GoodSubgraphWitness& w,
                         const VerifyGoodOptions& opts) {
    VerifyReport rep;
    VerifyReport femb = verify_embedding(g, w.spec, w.f);
    if (!femb.pass) {
        for (const auto& v : femb.violations) rep.fail("F: " + v);
        return rep;
    }
    if (w.f.order >= 2 && w.f.colour != w.colour) {
        rep.fail("F records colour " + std::to_string(w.f.colour) + ", witness says "
                 + std::to_string(w.colour));
        return rep;
    }

    // Sides must be the member's own bipartition.
    BipartiteMember m = member(w.spec, w.f.order);
    auto sorted = [](std::vector<int> v) { std::sort(v.begin(), v.end()); return v; };
    if (sorted(w.x_member) != sorted(m.left) || sorted(w.y_member) != sorted(m.right)) {
        rep.fail("witness sides do not match the member bipartition");
        return rep;
    }

    std::set<int> yset;
    for (int ym : w.y_member) yset.insert(w.f.vertices[static_cast<std::size_t>(ym)]);
    double sy = static_cast<double>(yset.size());

    std::set<int> in_parts;
    for (std::size_t i = 0; i < w.parts.size(); ++i) {
        for (int hv : w.parts[i]) {
            if (yset.count(hv) == 0)
                rep.fail("part " + std::to_string(i) + " contains a non-Y vertex");
            if (!in_parts.insert(hv).second)
                rep.fail("parts overlap at vertex " + std::to_string(hv));
        }
        if (static_cast<double>(w.parts[i].size()) + kTol < w.eta * sy)
            rep.fail("part " + std::to_string(i) + " smaller than eta|Y|");
    }
    double uncovered = sy - static_cast<double>(in_parts.size());
    if (uncovered > w.theta * sy + kTol)
        rep.fail("uncovered Y fraction exceeds theta");
    if (!rep.pass) return rep;

    SwitchRelation rel = SwitchRelation::from_witness(g, w);
    measure_chain_eta(rel, w.parts, opts, &rep, w.eta);
    return rep;
}

SwitchOutcome switch_matching(const ColouredCompleteGraph& g, const SequenceSpec& spec,
                              const SwitchRelation& rel, const std::vector<int>& y,
                              const VertexSet& z, double eta, double theta,
                              std::uint64_t seed) {
    if (z.universe() != g.n())
        throw PreconditionError("switch_matching: Z must live on the host");
    for (int yy : y)
        if (z.contains(yy)) throw PreconditionError("switch_matching: Y and Z must be disjoint");

    SwitchOutcome out;
    out.absorbed = VertexSet(g.n());
    out.leftover = VertexSet(g.n());
    double sy = static_cast<double>(y.size());
    int delta = spec.delta_bound();
    double mono_thr = 32.0 * static_cast<double>(delta)
        * std::pow(static_cast<double>(g.r()), delta);
    double t_real = std::min(std::min(eta * sy / 100.0, theta * sy),
                             std::min(sy / mono_thr, static_cast<double>(z.count())));
    int t = static_cast<int>(std::floor(t_real + 1e-12));
    out.t_cap = t;
    if (z.empty()) return out;

    // Any vertex is a valid order-1 member tile, so nothing is ever left
    // uncovered: vertices that cannot join F are singleton-tiled and recorded
    // in `leftover`.
    auto singleton_out = [&](int v) {
        out.tiles.push_back(Embedding{1, kSingletonColour, {v}});
        out.leftover.insert(v);
    };

    SplitRng rng(seed);
    VertexSet residual(g.n());
    if (t >= 1) {
        GreedyCoverResult cover = greedy_cover(g, z, spec, t, rng.sub("cover").seed());
        out.tiles = std::move(cover.tiles);
        residual = cover.residual;
    } else {
        // Nothing can be switched in; cover with members and singletons.
        GreedyCoverResult cover = greedy_cover(g, z, spec, 1, rng.sub("cover").seed());
        out.tiles = std::move(cover.tiles);
        cover.residual.for_each(singleton_out);
        return out;
    }
    if (residual.empty()) return out;

    // Injective match of T into Y through ~.
    std::map<int, int> ginv; // matched y -> its tau in T
    std::set<int> used_y;
    std::vector<int> matched_taus;
    residual.for_each([&](int tau) {
        for (int yy : y) {
            if (used_y.count(yy) != 0) continue;
            if (!rel.related(yy, tau)) continue;
            used_y.insert(yy);
            ginv[yy] = tau;
            matched_taus.push_back(tau);
            return;
        }
        singleton_out(tau);
    });
    if (ginv.empty()) return out;

    auto abort_switch = [&]() {
        for (const auto& [yy, tau] : ginv) singleton_out(tau);
        out.role_moves.clear();
        return out;
    };

    // A member copy R inside Y frees exactly |T| vertices once its vertices'
    // roles are shifted away along chains.
    int mt = static_cast<int>(ginv.size());
    VertexSet yset = VertexSet::from_range(g.n(), y.begin(), y.end());
    auto rcopy = find_mono_copy(g, yset, spec, mt, rng.sub("rcopy").seed());
    if (!rcopy) return abort_switch();
    const std::vector<int>& rverts = rcopy->embedding.vertices;

    std::set<int> rset(rverts.begin(), rverts.end());
    std::vector<int> xs, ys, commons;
    for (int x : rverts)
        if (ginv.find(x) == ginv.end()) xs.push_back(x);
    for (const auto& [yy, tau] : ginv) {
        if (rset.count(yy) != 0) commons.push_back(yy);
        else ys.push_back(yy);
    }
    std::size_t ell = xs.size();
    if (ys.size() != ell) throw StageError("switch", "R/g(T) alignment is inconsistent");

    // Chains avoid everything with a special role: R, g(T) and earlier chains.
    VertexSet excl(g.n());
    for (int v : rverts) excl.insert(v);
    for (const auto& [yy, tau] : ginv) excl.insert(yy);
    std::map<int, int> moves;
    for (std::size_t i = 0; i < ell; ++i) {
        int zi = -1, wi = -1;
        for (int zc : y) {
            if (excl.contains(zc) || !rel.related(xs[i], zc)) continue;
            for (int wc : y) {
                if (wc == zc || excl.contains(wc)) continue;
                if (rel.related(zc, wc) && rel.related(wc, ys[i])) {
                    zi = zc;
                    wi = wc;
                    break;
                }
            }
            if (zi >= 0) break;
        }
        if (zi < 0) return abort_switch();
        excl.insert(zi);
        excl.insert(wi);
        moves[xs[i]] = zi;
        moves[zi] = wi;
        moves[wi] = ys[i];
        moves[ys[i]] = ginv[ys[i]];
    }
    for (int c : commons) moves[c] = ginv[c];

    out.role_moves = std::move(moves);
    for (int tau : matched_taus) out.absorbed.insert(tau);
    out.tiles.push_back(rcopy->embedding);
    return out;
}

AbsorbResult absorb(const ColouredCompleteGraph& g, const GoodSubgraphWitness& w,
                    const VertexSet& z, std::uint64_t seed) {
    if (z.universe() != g.n())
        throw PreconditionError("absorb: Z must live on the host");

    VertexSet fset = w.host_set(g.n());
    VertexSet zz = z - fset;
    SwitchRelation rel = SwitchRelation::from_witness(g, w);
    SplitRng rng(seed);

    AbsorbResult out;
    out.leftover = VertexSet(g.n());

    // Assign each z to the part with the most related vertices, preferring
    // parts meeting the theta rule.
    std::vector<VertexSet> zparts(w.parts.size(), VertexSet(g.n()));
    zz.for_each([&](int zv) {
        int best = -1;
        double best_count = 0.0;
        bool best_qualified = false;
        for (std::size_t i = 0; i < w.parts.size(); ++i) {
            int cnt = 0;
            for (int yy : w.parts[i])
                if (rel.related(yy, zv)) ++cnt;
            if (cnt < 1) continue;
            bool qualified =
                static_cast<double>(cnt) + kTol >= w.theta * static_cast<double>(w.parts[i].size());
            if (best < 0 || (qualified && !best_qualified)
                || (qualified == best_qualified && cnt > best_count)) {
                best = static_cast<int>(i);
                best_count = cnt;
                best_qualified = qualified;
            }
        }
        out.part_assignment.push_back(best);
        if (best < 0) out.leftover.insert(zv);
        else zparts[static_cast<std::size_t>(best)].insert(zv);
    });

    std::map<int, int> moves;
    std::vector<Embedding> tiles;
    // Unassignable z's stay in the output as singleton tiles.
    out.leftover.for_each([&](int zv) {
        tiles.push_back(Embedding{1, kSingletonColour, {zv}});
    });
    for (std::size_t i = 0; i < w.parts.size(); ++i) {
        if (zparts[i].empty()) continue;
        SwitchOutcome sw =
            switch_matching(g, w.spec, rel, w.parts[i], zparts[i], w.eta, w.theta,
                            rng.sub("part", i).seed());
        for (const auto& [from, to] : sw.role_moves) moves[from] = to;
        for (auto& tile : sw.tiles) tiles.push_back(std::move(tile));
        out.leftover |= sw.leftover;
    }

    // Rebuild F with the moved roles.
    Embedding nf = w.f;
    for (int ym : w.y_member) {
        int host = w.f.vertices[static_cast<std::size_t>(ym)];
        auto it = moves.find(host);
        if (it != moves.end()) nf.vertices[static_cast<std::size_t>(ym)] = it->second;
    }
    VerifyReport nfrep = verify_embedding(g, w.spec, nf);
    if (!nfrep.pass)
        throw StageError("absorb", "rebuilt F is not a valid member copy: "
                                       + nfrep.violations.front());

    out.new_f = nf;
    out.tiling.n = g.n();
    out.tiling.spec = w.spec;
    out.tiling.cover_only = true;
    out.tiling.tiles.push_back(nf);
    for (auto& tile : tiles) out.tiling.tiles.push_back(std::move(tile));

    VertexSet target = fset | zz;
    VerifyReport cover = verify_tiling_over(g, w.spec, out.tiling, target);
    if (!cover.pass)
        throw StageError("absorb", "absorption output fails verification: "
                                       + cover.violations.front());
    return out;
}

namespace {

struct RestrictedBipartite {
    BipartiteGraph graph;
    std::vector<int> a_orig;
    std::vector<int> b_orig;
};

RestrictedBipartite restrict_bipartite(const BipartiteGraph& h, const std::vector<int>& a_keep,
                                       const std::vector<int>& b_keep) {
    RestrictedBipartite out;
    out.a_orig = a_keep;
    out.b_orig = b_keep;
    out.graph = BipartiteGraph(static_cast<int>(a_keep.size()), static_cast<int>(b_keep.size()));
    for (std::size_t ai = 0; ai < a_keep.size(); ++ai) {
        const VertexSet& row = h.row(a_keep[ai]);
        for (std::size_t bi = 0; bi < b_keep.size(); ++bi)
            if (row.contains(b_keep[bi]))
                out.graph.add_edge(static_cast<int>(ai), static_cast<int>(bi));
    }
    return out;
}

// Greedy chain packing in H-graph form: f(x) in N(z), f(z) in N(w), f(w) in N(y).
int h_chain_count(const BipartiteGraph& h, const std::vector<int>& s, const std::vector<int>& f,
                  int xi, int yi) {
    int n = static_cast<int>(s.size());
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    int fx = f[static_cast<std::size_t>(xi)];
    int count = 0;
    for (int zi = 0; zi < n; ++zi) {
        if (zi == xi || zi == yi || used[static_cast<std::size_t>(zi)]) continue;
        if (!h.row(s[static_cast<std::size_t>(zi)]).contains(fx)) continue;
        for (int wi = 0; wi < n; ++wi) {
            if (wi == zi || wi == xi || wi == yi || used[static_cast<std::size_t>(wi)]) continue;
            if (!h.row(s[static_cast<std::size_t>(wi)]).contains(f[static_cast<std::size_t>(zi)]))
                continue;
            if (!h.row(s[static_cast<std::size_t>(yi)]).contains(f[static_cast<std::size_t>(wi)]))
                continue;
            used[static_cast<std::size_t>(zi)] = 1;
            used[static_cast<std::size_t>(wi)] = 1;
            ++count;
            break;
        }
    }
    return count;
}

} // namespace

std::optional<OneGoodSet> find_one_good_set(const BipartiteGraph& h, double eps,
                                            const GoodSetOptions& opts) {
    if (!(eps > 0.0) || eps >= 1.0)
        throw PreconditionError("find_one_good_set: eps must be in (0, 1)");
    int na = h.a_size();
    int nb = h.b_size();
    if (na < 1 || nb < 1) throw PreconditionError("find_one_good_set: empty side");
    if (na > nb) throw PreconditionError("find_one_good_set: needs |A| <= |B|");
    for (int a = 0; a < na; ++a)
        if (static_cast<double>(h.row(a).count()) + kTol < eps * static_cast<double>(nb))
            throw PreconditionError("find_one_good_set: a vertex has degree below eps|B|");

    SplitRng root(opts.seed);
    std::vector<int> a_ids(static_cast<std::size_t>(na));
    for (int i = 0; i < na; ++i) a_ids[static_cast<std::size_t>(i)] = i;
    RestrictedBipartite trimmed;
    const BipartiteGraph* work = &h;
    if (opts.faithful_trim) {
        int target =
            static_cast<int>(std::pow(eps, 13) * static_cast<double>(na) / 128.0);
        if (target < 1) return std::nullopt;
        SplitRng trng = root.sub("one-good/trim");
        std::vector<int> keep = trng.sample_without_replacement(na, target);
        std::sort(keep.begin(), keep.end());
        std::vector<int> ball(static_cast<std::size_t>(nb));
        for (int i = 0; i < nb; ++i) ball[static_cast<std::size_t>(i)] = i;
        trimmed = restrict_bipartite(h, keep, ball);
        work = &trimmed.graph;
        a_ids = keep;
    }
    int wa = work->a_size();

    double delta = (1.0 / 3.0) / (1.0 + 2.0 / (eps * eps * eps));
    double delta_pair = std::max(delta / 8.0, 2.0 * std::pow(eps, 4));
    double codeg_demand = std::pow(eps, 3) * static_cast<double>(nb);
    double c_target = std::min(std::pow(eps, 4) / 8.0, std::pow(eps, 10) / 32.0);

    std::optional<OneGoodSet> best;
    for (int attempt = 0; attempt < std::max(opts.max_retries, 1); ++attempt) {
        SplitRng arng = root.sub("one-good/attempt", static_cast<std::uint64_t>(attempt));
        DrcResult drc;
        try {
            drc = pair_drc(*work, eps, delta_pair, arng.sub("pair-drc").seed(), 32, false);
        } catch (const RetryExhausted&) {
            continue;
        }
        std::vector<int> s0 = drc.s.to_vector();
        if (s0.empty()) continue;

        // Keep vertices with few low-co-degree partners.
        std::vector<int> bad(s0.size(), 0);
        for (std::size_t i = 0; i < s0.size(); ++i)
            for (std::size_t j = i + 1; j < s0.size(); ++j) {
                if (work->row(s0[i]).intersection_count(work->row(s0[j]))
                    < codeg_demand - kTol) {
                    ++bad[i];
                    ++bad[j];
                }
            }
        std::vector<int> s1;
        double bad_cap = (delta / 2.0) * static_cast<double>(s0.size());
        for (std::size_t i = 0; i < s0.size(); ++i)
            if (static_cast<double>(bad[i]) <= bad_cap + kTol) s1.push_back(s0[i]);
        if (s1.empty()) continue;

        // B': vertices of B seeing a delta fraction of S1.
        VertexSet s1set(wa);
        for (int x : s1) s1set.insert(x);
        VertexSet bprime(nb);
        double bp_demand = delta * static_cast<double>(s1.size());
        for (int b = 0; b < nb; ++b)
            if (static_cast<double>(work->col(b).intersection_count(s1set)) + kTol >= bp_demand)
                bprime.insert(b);

        // Random partner in B', then a maximal injective subset.
        std::vector<std::pair<int, int>> assigned;
        for (int x : s1) {
            VertexSet cand = work->row(x) & bprime;
            int c = cand.count();
            if (c == 0) continue;
            int pick = static_cast<int>(
                arng.sub("g", static_cast<std::uint64_t>(x)).below(static_cast<std::uint64_t>(c)));
            int b = cand.first();
            for (int step = 0; step < pick; ++step) b = cand.next(b);
            assigned.emplace_back(x, b);
        }
        arng.sub("order").shuffle(assigned);
        std::set<int> used_b;
        std::vector<int> s, f;
        for (auto [x, b] : assigned) {
            if (!used_b.insert(b).second) continue;
            s.push_back(x);
            f.push_back(b);
        }
        if (s.empty()) continue;

        // Verify the switching chains.
        double min_ratio = 1.0;
        int sn = static_cast<int>(s.size());
        if (sn >= 2) {
            std::vector<std::pair<int, int>> pairs;
            if (sn <= opts.pair_exact_cap) {
                for (int i = 0; i < sn; ++i)
                    for (int j = 0; j < sn; ++j)
                        if (i != j) pairs.emplace_back(i, j);
            } else {
                SplitRng prng = arng.sub("verify-pairs");
                for (int sidx = 0; sidx < opts.sampled_pairs; ++sidx) {
                    int i = static_cast<int>(prng.below(static_cast<std::uint64_t>(sn)));
                    int j = static_cast<int>(prng.below(static_cast<std::uint64_t>(sn - 1)));
                    if (j >= i) ++j;
                    pairs.emplace_back(i, j);
                }
            }
            for (auto [i, j] : pairs) {
                int chains = h_chain_count(*work, s, f, i, j);
                min_ratio = std::min(min_ratio,
                                     static_cast<double>(chains) / static_cast<double>(sn));
            }
        }

        OneGoodSet result;
        result.s.reserve(s.size());
        for (int x : s) result.s.push_back(a_ids[static_cast<std::size_t>(x)]);
        result.f = f;
        result.c_size = static_cast<double>(s.size()) / static_cast<double>(na);
        result.c_chain = min_ratio;
        result.c_target = c_target;
        result.met_target = result.c_chain + 1e-12 >= c_target
            && result.c_size + 1e-12 >= c_target;
        result.retries = attempt;
        if (result.met_target) return result;
        if (!best || result.c_chain > best->c_chain
            || (result.c_chain == best->c_chain && result.s.size() > best->s.size()))
            best = std::move(result);
    }
    return best;
}

ManyGoodSets find_many_good_sets(const BipartiteGraph& h, double eps, double theta,
                                 const GoodSetOptions& opts) {
    if (!(eps > 0.0) || eps >= 1.0)
        throw PreconditionError("find_many_good_sets: eps must be in (0, 1)");
    if (!(theta > 0.0) || theta >= 1.0)
        throw PreconditionError("find_many_good_sets: theta must be in (0, 1)");
    int na = h.a_size();
    int nb = h.b_size();
    if (na < 1 || nb < 1) throw PreconditionError("find_many_good_sets: empty side");
    if (static_cast<double>(na) > (eps / 2.0) * static_cast<double>(nb) + kTol)
        throw PreconditionError("find_many_good_sets: needs |A| <= (eps/2)|B|");
    for (int a = 0; a < na; ++a)
        if (static_cast<double>(h.row(a).count()) + kTol < eps * static_cast<double>(nb))
            throw PreconditionError("find_many_good_sets: a vertex has degree below eps|B|");

    ManyGoodSets out;
    out.f.assign(static_cast<std::size_t>(na), -1);
    double c_tgt = std::min(std::pow(eps / 2.0, 4) / 8.0, std::pow(eps / 2.0, 10) / 32.0);
    out.eta_target = theta * c_tgt;

    std::vector<char> a_alive(static_cast<std::size_t>(na), 1);
    std::vector<char> b_alive(static_cast<std::size_t>(nb), 1);
    int alive = na;
    SplitRng root(opts.seed);
    std::vector<double> set_chain;

    while (static_cast<double>(alive) > theta * static_cast<double>(na) + kTol
           && out.rounds < opts.max_rounds) {
        std::vector<int> ak, bk;
        for (int a = 0; a < na; ++a)
            if (a_alive[static_cast<std::size_t>(a)]) ak.push_back(a);
        for (int b = 0; b < nb; ++b)
            if (b_alive[static_cast<std::size_t>(b)]) bk.push_back(b);
        RestrictedBipartite hk = restrict_bipartite(h, ak, bk);
        GoodSetOptions sub = opts;
        sub.faithful_trim = false;
        sub.seed = root.sub("many-good/round", static_cast<std::uint64_t>(out.rounds)).seed();
        std::optional<OneGoodSet> one;
        try {
            one = find_one_good_set(hk.graph, eps / 2.0, sub);
        } catch (const PreconditionError&) {
            break; // masked degrees dropped below the guarantee: stop honestly
        }
        if (!one || one->s.empty()) break;
        std::vector<int> set_orig;
        set_orig.reserve(one->s.size());
        for (std::size_t i = 0; i < one->s.size(); ++i) {
            int a = hk.a_orig[static_cast<std::size_t>(one->s[static_cast<std::size_t>(i)])];
            int b = hk.b_orig[static_cast<std::size_t>(one->f[static_cast<std::size_t>(i)])];
            set_orig.push_back(a);
            out.f[static_cast<std::size_t>(a)] = b;
            a_alive[static_cast<std::size_t>(a)] = 0;
            b_alive[static_cast<std::size_t>(b)] = 0;
            --alive;
        }
        out.sets.push_back(std::move(set_orig));
        set_chain.push_back(one->c_chain);
        ++out.rounds;
    }
    out.residual_fraction = static_cast<double>(alive) / static_cast<double>(na);

    // Extend f injectively over the rest of A.
    std::set<int> used_b;
    for (int b_val : out.f)
        if (b_val >= 0) used_b.insert(b_val);
    for (int a = 0; a < na; ++a) {
        if (out.f[static_cast<std::size_t>(a)] >= 0) continue;
        const VertexSet& row = h.row(a);
        int pick = -1;
        for (int b = row.first(); b >= 0; b = row.next(b))
            if (used_b.count(b) == 0) { pick = b; break; }
        if (pick < 0)
            throw StageError("find-many-good-sets", "cannot extend f injectively over A");
        out.f[static_cast<std::size_t>(a)] = pick;
        used_b.insert(pick);
    }

    double eta = out.sets.empty() ? 0.0 : 1.0;
    for (std::size_t i = 0; i < out.sets.size(); ++i) {
        eta = std::min(eta, static_cast<double>(out.sets[i].size()) / static_cast<double>(na));
        eta = std::min(eta, set_chain[i]);
    }
    out.eta = eta;
    return out;
}

GoodSubgraphOutcome find_good_subgraph(const ColouredCompleteGraph& g, const SequenceSpec& spec,
                                       const VertexSet& u, const VertexSet& v,
                                       const std::vector<int>& w, int colour, double eps,
                                       const FindGoodOptions& opts) {
    if (u.universe() != g.n() || v.universe() != g.n())
        throw PreconditionError("find_good_subgraph: U and V must live on the host");
    if (u.intersects(v))
        throw PreconditionError("find_good_subgraph: U and V must be disjoint");
    if (colour < 0 || colour >= g.r())
        throw PreconditionError("find_good_subgraph: colour out of range");
    if (!(eps > 0.0) || eps >= 1.0)
        throw PreconditionError("find_good_subgraph: eps must be in (0, 1)");

    int r = g.r();
    int delta = spec.delta_bound();
    double theta = good_theta(delta, r);
    int nu = u.count();
    int nv = v.count();
    if (!opts.practical_gates) {
        if (nu < 100 * r * r)
            throw PreconditionError("find_good_subgraph: needs |U| >= 100 r^2");
        if (static_cast<double>(nu) > (eps / 2.0) * static_cast<double>(nv) + kTol)
            throw PreconditionError("find_good_subgraph: needs |U| <= (eps/2)|V|");
    }
    int k = nu / (16 * r * r);
    if (opts.practical_gates) k = std::max(k, 1);
    if (k < 1) throw StageError("good-subgraph", "U too small for any member order");

    SplitRng rng(opts.seed);
    BipartiteMember mem = member(spec, k);
    DerivedMultiHypergraph hgr = derive_hypergraph(mem);

    DownClosedHypergraph dch(g, u, v, colour, eps * static_cast<double>(nv), delta,
                             opts.census_cap, rng.sub("census").seed());
    double lambda = opts.lambda > 0.0 ? opts.lambda : 1.0 / (4.0 * static_cast<double>(delta));

    std::vector<VertexSet> constraints;
    constraints.reserve(w.size());
    for (int wi : w) {
        if (wi < 0 || wi >= g.n())
            throw PreconditionError("find_good_subgraph: W vertex outside the host");
        constraints.push_back(g.neighbours(colour, wi) & u);
    }

    // Practical mode keeps the best attempt when W exceeds the exp(lambda m)
    // constraint budget: starved W vertices report honest counts and simply
    // never qualify for absorption.
    CarefulEmbedResult emb =
        embed_carefully(hgr, dch, lambda, r, constraints, rng.sub("embed").seed(),
                        opts.embed_retries, !opts.practical_gates, opts.practical_gates);

    // Incidence graph: A = hyperedges of the member, B = V; the row of a
    // hyperedge is the common `colour` neighbourhood of its image inside V.
    std::vector<int> b_list = v.to_vector();
    int nb = static_cast<int>(b_list.size());
    int ecount = hgr.edge_count();
    if (static_cast<double>(ecount) > (eps / 2.0) * static_cast<double>(nb) + kTol)
        throw StageError("good-subgraph",
                         "member hyperedge count exceeds (eps/2)|V|; no injectivity slack");
    std::vector<int> bpos(static_cast<std::size_t>(g.n()), -1);
    for (int i = 0; i < nb; ++i) bpos[static_cast<std::size_t>(b_list[static_cast<std::size_t>(i)])] = i;
    BipartiteGraph hb(ecount, nb);
    hb.b_hosts = b_list;
    for (int j = 0; j < ecount; ++j) {
        std::vector<int> img;
        for (int x : hgr.edges[static_cast<std::size_t>(j)])
            img.push_back(emb.map[static_cast<std::size_t>(x)]);
        VertexSet common = g.common_neighbourhood(img, colour, v);
        common.for_each([&](int host) {
            hb.add_edge(j, bpos[static_cast<std::size_t>(host)]);
        });
    }

    GoodSetOptions gopts = opts.good_sets;
    gopts.seed = rng.sub("good-sets").seed();
    ManyGoodSets many = find_many_good_sets(hb, eps, theta, gopts);

    GoodSubgraphOutcome out;
    out.member_order = k;
    GoodSubgraphWitness& wit = out.witness;
    wit.spec = spec;
    wit.colour = colour;
    wit.theta = theta;
    wit.x_member = hgr.x_vertices;
    wit.y_member = hgr.y_vertices;
    wit.f.order = k;
    wit.f.colour = k >= 2 ? colour : kSingletonColour;
    wit.f.vertices.assign(static_cast<std::size_t>(k), -1);
    for (int i = 0; i < hgr.m; ++i)
        wit.f.vertices[static_cast<std::size_t>(hgr.x_vertices[static_cast<std::size_t>(i)])] =
            emb.map[static_cast<std::size_t>(i)];
    for (int j = 0; j < ecount; ++j)
        wit.f.vertices[static_cast<std::size_t>(hgr.y_vertices[static_cast<std::size_t>(j)])] =
            b_list[static_cast<std::size_t>(many.f[static_cast<std::size_t>(j)])];
    for (const auto& set : many.sets) {
        std::vector<int> part;
        part.reserve(set.size());
        for (int a : set)
            part.push_back(b_list[static_cast<std::size_t>(many.f[static_cast<std::size_t>(a)])]);
        wit.parts.push_back(std::move(part));
    }

    VerifyReport fr = verify_embedding(g, spec, wit.f);
    if (!fr.pass)
        throw StageError("good-subgraph", "assembled F is invalid: " + fr.violations.front());

    // Achieved eta: size ratios and host-space chain ratios, measured by the
    // same packing verify_good uses.
    double sy = static_cast<double>(wit.y_member.size());
    double eta = wit.parts.empty() ? 0.0 : 1.0;
    for (const auto& part : wit.parts)
        eta = std::min(eta, static_cast<double>(part.size()) / sy);
    SwitchRelation rel = SwitchRelation::from_witness(g, wit);
    VerifyGoodOptions vopts;
    vopts.seed = rng.sub("eta-measure").seed();
    eta = std::min(eta, measure_chain_eta(rel, wit.parts, vopts, nullptr, 0.0));
    wit.eta = eta;

    if (opts.verify) {
        VerifyGoodOptions check = vopts; // same pair selection as the measurement
        VerifyReport rep = verify_good(g, wit, check);
        if (!rep.pass)
            throw StageError("good-subgraph",
                             "witness fails verification: " + rep.violations.front());
    }

    out.w_counts = emb.constraint_counts;
    out.w_demand = 2.0 * theta * static_cast<double>(ecount);
    return out;
}

} // namespace monotile
