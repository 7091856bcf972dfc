#include "monotile/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include "monotile/bipartite_graph.hpp"
#include "monotile/drc.hpp"
#include "monotile/errors.hpp"
#include "monotile/ramsey_cover.hpp"
#include "monotile/rng.hpp"

namespace monotile {

namespace {

constexpr double kTol = 1e-9;

double binom_d(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double out = 1.0;
    for (int i = 0; i < k; ++i) out *= static_cast<double>(n - i) / static_cast<double>(i + 1);
    return out;
}

// Full cover of `within`: greedy member tiles, then singletons.
std::vector<Embedding> cover_exact(const ColouredCompleteGraph& g, const SequenceSpec& spec,
                                   const VertexSet& within, std::uint64_t seed) {
    std::vector<Embedding> tiles;
    if (within.empty()) return tiles;
    GreedyCoverResult cov = greedy_cover(g, within, spec, 1, seed);
    tiles = std::move(cov.tiles);
    cov.residual.for_each([&](int v) {
        tiles.push_back(Embedding{1, kSingletonColour, {v}});
    });
    return tiles;
}

std::vector<std::int64_t> crossing_colour_counts(const ColouredCompleteGraph& g,
                                                 const VertexSet& a, const VertexSet& b) {
    std::vector<std::int64_t> counts(static_cast<std::size_t>(g.r()), 0);
    a.for_each([&](int av) {
        for (int c = 0; c < g.r(); ++c)
            counts[static_cast<std::size_t>(c)] += g.neighbours(c, av).intersection_count(b);
    });
    return counts;
}

// Fraction of delta-subsets of `a_set` whose common `colour` neighbourhood
// inside v_set has fewer than `threshold` vertices.  Exact with bulk pruning
// up to `cap` subsets, sampled beyond.
double bad_delta_fraction(const ColouredCompleteGraph& g, const VertexSet& a_set,
                          const VertexSet& v_set, int colour, double threshold, int delta,
                          std::uint64_t cap, SplitRng rng) {
    std::vector<int> al = a_set.to_vector();
    int m = static_cast<int>(al.size());
    if (m < delta) return 0.0;
    double total = binom_d(m, delta);
    if (total <= static_cast<double>(cap)) {
        std::int64_t bad = 0;
        auto rec = [&](auto&& self, int start, const VertexSet& common, int depth) -> void {
            if (static_cast<double>(common.count()) + kTol < threshold) {
                bad += static_cast<std::int64_t>(binom_d(m - start, delta - depth));
                return;
            }
            if (depth == delta) return;
            for (int i = start; i <= m - (delta - depth); ++i) {
                VertexSet next = common;
                next &= g.neighbours(colour, al[static_cast<std::size_t>(i)]);
                self(self, i + 1, next, depth + 1);
            }
        };
        rec(rec, 0, v_set, 0);
        return static_cast<double>(bad) / total;
    }
    const int samples = 20'000;
    std::int64_t bad = 0;
    for (int s = 0; s < samples; ++s) {
        std::vector<int> idx = rng.sample_without_replacement(m, delta);
        VertexSet common = v_set;
        for (int i : idx) common &= g.neighbours(colour, al[static_cast<std::size_t>(i)]);
        if (static_cast<double>(common.count()) + kTol < threshold) ++bad;
    }
    return static_cast<double>(bad) / static_cast<double>(samples);
}

} // namespace

double PipelineParams::eps(int k, int r, int delta) const {
    return 1.0 / (std::pow(2.0, k) * std::pow(static_cast<double>(r), delta));
}

namespace {
double delta_family(double c_embed, double big_c, int r, int delta, int exponent) {
    double base = 100.0 * big_c * static_cast<double>(r) * static_cast<double>(delta) / c_embed;
    double power = std::pow(base, exponent);
    if (power > 700.0) return 0.0; // underflows exp(-power) anyway
    return std::exp(-power);
}
} // namespace

double PipelineParams::delta_k(int k, int r, int delta) const {
    return delta_family(c_embed, big_c, r, delta, 2 * (r - k) + 3);
}

double PipelineParams::delta_prime(int k, int r, int delta) const {
    return delta_family(c_embed, big_c, r, delta, 2 * (r - k) + 1);
}

double PipelineParams::delta_dprime(int k, int r, int delta) const {
    return delta_family(c_embed, big_c, r, delta, 2 * (r - k) + 2);
}

std::string PipelineParams::digest() const {
    std::ostringstream out;
    out.setf(std::ios::fmtflags(0), std::ios::floatfield);
    out.precision(12);
    out << "mode=" << (mode == PipelineMode::faithful ? "faithful" : "practical")
        << ";seed=" << seed << ";c=" << c_embed << ";C=" << big_c << ";Cr=" << c_r
        << ";min_induction=" << min_induction << ";pdelta=" << practical_delta
        << ";ufrac=" << u_fraction << ";ucombine=" << combine_u_min
        << ";resample=" << resample_cap << ";subsetcap=" << subset_count_cap
        << ";lambda=" << good.lambda << ";censuscap=" << good.census_cap
        << ";embedretries=" << good.embed_retries << ";verify=" << (good.verify ? 1 : 0)
        << ";gs_retries=" << good.good_sets.max_retries
        << ";gs_paircap=" << good.good_sets.pair_exact_cap
        << ";gs_sampled=" << good.good_sets.sampled_pairs
        << ";gs_rounds=" << good.good_sets.max_rounds;
    return out.str();
}

CombinedAbsorber combine_absorbers(const ColouredCompleteGraph& g, const SequenceSpec& spec,
                                   const VertexSet& u, const std::vector<VertexSet>& vs,
                                   const std::vector<int>& colours, const VertexSet& w,
                                   double eps, const PipelineParams& params,
                                   std::uint64_t seed) {
    if (vs.size() != colours.size())
        throw PreconditionError("combine_absorbers: vs and colours must be aligned");
    if (u.universe() != g.n() || w.universe() != g.n())
        throw PreconditionError("combine_absorbers: sets must live on the host");
    if (!(eps > 0.0) || eps >= 1.0)
        throw PreconditionError("combine_absorbers: eps must be in (0, 1)");

    CombinedAbsorber ca;
    ca.d = VertexSet(g.n());
    int r = g.r();
    int delta = spec.delta_bound();
    int nu = u.count();

    int gate = params.combine_u_min > 0 ? params.combine_u_min : 200 * r * r * delta;
    if (nu < gate) {
        ca.escaped = true;
        ca.escape_reason = "U below the size gate; any Z is covered greedily";
        return ca;
    }
    double expo = std::pow(params.c_embed, delta) / (160.0 * r * r * delta)
        * static_cast<double>(nu);
    double wcap = expo > 700.0 ? std::numeric_limits<double>::infinity() : std::exp(expo);
    if (static_cast<double>(w.count()) > wcap) {
        ca.escaped = true;
        ca.escape_reason = "W above the exponential cap; any Z is covered greedily";
        return ca;
    }

    SplitRng rng(seed);
    double w_demand = static_cast<double>(nu) / (4.0 * r);
    for (std::size_t i = 0; i < colours.size(); ++i) {
        ColourAbsorber cab;
        cab.colour = colours[i];
        cab.d_i = VertexSet(g.n());
        cab.w_i = VertexSet(g.n());
        w.for_each([&](int wv) {
            if (static_cast<double>(g.neighbours(colours[i], wv).intersection_count(u)) + kTol
                >= w_demand)
                cab.w_i.insert(wv);
        });
        VertexSet ut = u;
        ut -= ca.d;
        VertexSet vt = vs[i];
        vt -= ca.d;
        FindGoodOptions fg = params.good;
        fg.seed = rng.sub("good", i).seed();
        fg.practical_gates = params.mode == PipelineMode::practical;
        try {
            GoodSubgraphOutcome o = find_good_subgraph(g, spec, ut, vt, cab.w_i.to_vector(),
                                                       colours[i], eps / 2.0, fg);
            cab.witness = std::move(o.witness);
            cab.ok = true;
            cab.d_i = cab.witness.host_set(g.n());
            ca.d |= cab.d_i;
        } catch (const StageError& e) {
            cab.note = e.what();
        } catch (const RetryExhausted& e) {
            cab.note = e.what();
        } catch (const PreconditionError& e) {
            cab.note = e.what();
        }
        ca.colours.push_back(std::move(cab));
    }
    return ca;
}

Tiling absorb_with(const ColouredCompleteGraph& g, const SequenceSpec& spec,
                   const CombinedAbsorber& ca, const VertexSet& z, std::uint64_t seed) {
    if (z.universe() != g.n())
        throw PreconditionError("absorb_with: Z must live on the host");
    Tiling t;
    t.n = g.n();
    t.spec = spec;
    t.cover_only = true;
    SplitRng rng(seed);

    VertexSet remaining = z;
    if (ca.d.universe() == g.n()) remaining -= ca.d;
    for (std::size_t i = 0; i < ca.colours.size(); ++i) {
        const ColourAbsorber& cab = ca.colours[i];
        VertexSet zi(g.n());
        if (cab.w_i.universe() == g.n()) {
            zi = remaining & cab.w_i;
            remaining -= zi;
        }
        if (cab.ok) {
            AbsorbResult ar = absorb(g, cab.witness, zi, rng.sub("absorb", i).seed());
            for (auto& tile : ar.tiling.tiles) t.tiles.push_back(std::move(tile));
        } else {
            for (auto& tile : cover_exact(g, spec, zi, rng.sub("cover", i).seed()))
                t.tiles.push_back(std::move(tile));
        }
    }
    for (auto& tile : cover_exact(g, spec, remaining, rng.sub("tail").seed()))
        t.tiles.push_back(std::move(tile));
    return t;
}

InductionOutcome induction_step(const ColouredCompleteGraph& g, const SequenceSpec& spec,
                                const VertexSet& a, const VertexSet& b,
                                const std::vector<VertexSet>& vs_prev,
                                const std::vector<int>& used_colours,
                                const PipelineParams& params, std::uint64_t seed) {
    if (used_colours.empty())
        throw PreconditionError("induction_step: needs at least the current colour");
    if (vs_prev.size() + 1 != used_colours.size())
        throw PreconditionError("induction_step: vs_prev must align with used_colours[:-1]");
    if (a.universe() != g.n() || b.universe() != g.n() || a.intersects(b))
        throw PreconditionError("induction_step: A and B must be disjoint host sets");
    for (int c : used_colours)
        if (c < 0 || c >= g.r()) throw PreconditionError("induction_step: colour out of range");

    int r = g.r();
    int delta = spec.delta_bound();
    int k = static_cast<int>(used_colours.size());
    int colour_k = used_colours.back();
    bool faithful = params.mode == PipelineMode::faithful;

    InductionOutcome out;
    out.a_next = VertexSet(g.n());
    out.b_next = VertexSet(g.n());
    out.w = VertexSet(g.n());
    out.absorber.d = VertexSet(g.n());

    auto escape = [&](const std::string& reason) {
        out.terminal = true;
        out.terminal_reason = reason;
        out.absorber.escaped = true;
        out.absorber.escape_reason = reason;
        return out;
    };

    double na = static_cast<double>(a.count());
    double gate;
    if (faithful) {
        double ddp = params.delta_dprime(k, r, delta);
        gate = ddp > 0.0 ? 4.0 * delta * std::pow(ddp, -params.big_c)
                         : std::numeric_limits<double>::infinity();
    } else {
        gate = params.min_induction;
    }
    if (na < gate || na < 2.0 || b.count() < 1) return escape("small-A");

    SplitRng rng(seed);

    // U from k-set DRC on the colour-k class between A and B.
    std::vector<int> a_list = a.to_vector();
    std::vector<int> b_list = b.to_vector();
    BipartiteGraph bip = BipartiteGraph::colour_class(g, a_list, b_list, colour_k);
    double drc_delta = faithful ? params.delta_dprime(k, r, delta) : params.practical_delta;
    if (!(drc_delta > 0.0)) return escape("small-A"); // faithful delta underflowed
    DrcResult drc;
    try {
        drc = k_set_drc(bip, r, delta, drc_delta, rng.sub("u-drc").seed(), 64, false);
    } catch (const RetryExhausted& e) {
        return escape(std::string("drc-failed: ") + e.what());
    } catch (const PreconditionError& e) {
        return escape(std::string("drc-failed: ") + e.what());
    }
    VertexSet u(g.n());
    drc.s.for_each([&](int ai) { u.insert(a_list[static_cast<std::size_t>(ai)]); });

    // Random trim so |U| stays within a factor 2 of its target size.
    double tfrac = faithful ? std::pow(params.delta_dprime(k, r, delta), params.big_c)
                            : params.u_fraction;
    int target = std::max(1, static_cast<int>(std::ceil(tfrac * na)));
    if (u.count() > 2 * target) {
        std::vector<int> ul = u.to_vector();
        std::vector<int> idx =
            rng.sub("u-trim").sample_without_replacement(static_cast<int>(ul.size()), target);
        VertexSet trimmed(g.n());
        for (int i : idx) trimmed.insert(ul[static_cast<std::size_t>(i)]);
        u = trimmed;
    }
    out.u_size = u.count();
    int nu = u.count();

    std::vector<VertexSet> vs = vs_prev;
    vs.push_back(b); // V_k = B

    // W: vertices of A u B with many colour-i neighbours in U for some i <= k.
    VertexSet ab = a | b;
    double w_demand = static_cast<double>(nu) / (4.0 * r);
    ab.for_each([&](int wv) {
        for (int i = 0; i < k; ++i) {
            if (static_cast<double>(
                    g.neighbours(used_colours[static_cast<std::size_t>(i)], wv)
                        .intersection_count(u))
                    + kTol
                >= w_demand) {
                out.w.insert(wv);
                return;
            }
        }
    });

    double eps = params.eps(k, r, delta);
    out.absorber = combine_absorbers(g, spec, u, vs, used_colours, out.w, eps, params,
                                     rng.sub("combine").seed());

    VertexSet s_set = ab;
    s_set -= out.absorber.d;
    s_set -= out.w;
    VertexSet u_prime = u;
    u_prime -= out.absorber.d;
    int ns = s_set.count();

    bool deterministic = 2 * u_prime.count() < ns;
    int attempts = deterministic ? 1 : std::max(1, params.resample_cap);
    std::vector<int> up_list = u_prime.to_vector();
    int want = ns / 2;
    double eps_next = params.eps(k + 1, r, delta);
    double dprime = faithful ? params.delta_prime(k, r, delta) : params.practical_delta;
    std::string fail_note = "no draw attempted";

    for (int att = 0; att < attempts; ++att) {
        out.resamples = att;
        VertexSet ap(g.n());
        if (deterministic) {
            ap = u_prime;
        } else {
            std::vector<int> pick = rng.sub("a-prime", static_cast<std::uint64_t>(att))
                                        .sample_without_replacement(
                                            static_cast<int>(up_list.size()), want);
            for (int i : pick) ap.insert(up_list[static_cast<std::size_t>(i)]);
        }
        VertexSet bp = s_set;
        bp -= ap;

        if ((ap | bp).count() <= 2) {
            out.terminal = true;
            out.terminal_reason = "done";
            out.a_next = ap;
            out.b_next = bp;
            for (auto& vset : vs) {
                VertexSet vp = vset;
                vp -= out.absorber.d;
                out.v_next.push_back(std::move(vp));
            }
            return out;
        }

        // Colour-count condition: few A'-B' edges in the used colours.
        std::int64_t cross_used = 0;
        ap.for_each([&](int av) {
            for (int i = 0; i < k; ++i)
                cross_used += g.neighbours(used_colours[static_cast<std::size_t>(i)], av)
                                  .intersection_count(bp);
        });
        double total = static_cast<double>(ap.count()) * static_cast<double>(bp.count());
        bool cond_colour =
            static_cast<double>(cross_used) < (static_cast<double>(k) / r) * total - kTol;

        // Bad-set condition into every V'_i.
        bool cond_bad = true;
        if (cond_colour) {
            for (int i = 0; i < k && cond_bad; ++i) {
                VertexSet vpi = vs[static_cast<std::size_t>(i)];
                vpi -= out.absorber.d;
                double thr = eps_next * static_cast<double>(vpi.count());
                double frac = bad_delta_fraction(
                    g, ap, vpi, used_colours[static_cast<std::size_t>(i)], thr, delta,
                    params.subset_count_cap,
                    rng.sub("bad-count", static_cast<std::uint64_t>(att) * 64 + i));
                if (frac > dprime + 1e-12) cond_bad = false;
            }
        }

        if (cond_colour && cond_bad) {
            // Majority colour outside the used ones.
            std::vector<char> used_mask(static_cast<std::size_t>(r), 0);
            for (int c : used_colours) used_mask[static_cast<std::size_t>(c)] = 1;
            std::vector<std::int64_t> counts = crossing_colour_counts(g, ap, bp);
            int best = -1;
            for (int c = 0; c < r; ++c) {
                if (used_mask[static_cast<std::size_t>(c)]) continue;
                if (best < 0 || counts[static_cast<std::size_t>(c)]
                        > counts[static_cast<std::size_t>(best)])
                    best = c;
            }
            out.a_next = ap;
            out.b_next = bp;
            for (auto& vset : vs) {
                VertexSet vp = vset;
                vp -= out.absorber.d;
                out.v_next.push_back(std::move(vp));
            }
            if (best < 0) {
                out.terminal = true;
                out.terminal_reason = "no-next-colour";
                return out;
            }
            out.next_colour = best;
            return out;
        }
        fail_note = cond_colour ? "bad-set condition" : "colour-count condition";
    }

    out.a_next = VertexSet(g.n());
    out.b_next = VertexSet(g.n());
    out.terminal = true;
    out.terminal_reason = "resample-exhausted: " + fail_note;
    return out;
}

AbsorberLadder iterated_absorbers(const ColouredCompleteGraph& g, const SequenceSpec& spec,
                                  const PipelineParams& params, std::uint64_t seed) {
    AbsorberLadder lad;
    int n = g.n();
    VertexSet t1 = VertexSet::full(n);
    if (n <= 2) {
        lad.t_final = t1;
        return lad;
    }

    SplitRng rng(seed);
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    rng.sub("halves").shuffle(perm);
    VertexSet a(n), b(n);
    int half = n / 2;
    for (int i = 0; i < n; ++i) {
        if (i < half) a.insert(perm[static_cast<std::size_t>(i)]);
        else b.insert(perm[static_cast<std::size_t>(i)]);
    }

    std::vector<std::int64_t> counts = crossing_colour_counts(g, a, b);
    int c1 = 0;
    for (int c = 1; c < g.r(); ++c)
        if (counts[static_cast<std::size_t>(c)] > counts[static_cast<std::size_t>(c1)]) c1 = c;

    std::vector<int> used = {c1};
    std::vector<VertexSet> vs_prev;
    VertexSet t = t1;

    for (int level = 1; level <= g.r(); ++level) {
        InductionOutcome o = induction_step(g, spec, a, b, vs_prev, used, params,
                                            rng.sub("level", level).seed());
        AbsorberLevel lv;
        lv.level = level;
        lv.colour = used.back();
        lv.t = t;
        lv.absorber = std::move(o.absorber);
        lv.w = o.w;
        lv.u_size = o.u_size;
        lv.resamples = o.resamples;
        lad.levels.push_back(std::move(lv));
        lad.colour_order.push_back(used.back());
        lad.ell = level;

        VertexSet tn = o.a_next | o.b_next;
        if (o.terminal) {
            lad.t_final = tn;
            if (tn.count() > 2) {
                lad.truncated = true;
                lad.truncation_reason = o.terminal_reason;
            }
            return lad;
        }
        a = o.a_next;
        b = o.b_next;
        vs_prev = o.v_next;
        used.push_back(o.next_colour);
        t = tn;
    }
    lad.t_final = t;
    if (t.count() > 2) {
        lad.truncated = true;
        lad.truncation_reason = "colour budget exhausted";
    }
    return lad;
}

TileResult tile(const ColouredCompleteGraph& g, const SequenceSpec& spec,
                const PipelineParams& params) {
    int n = g.n();
    int r = g.r();
    int delta = spec.delta_bound();

    TileResult res;
    res.metrics.seed = params.seed;
    res.metrics.params_digest = params.digest();
    res.metrics.greedy_bound = greedy_cover_bound(delta, r, std::max(n, 1), 1.0);
    res.tiling.n = n;
    res.tiling.spec = spec;
    res.tiling.cover_only = false;

    if (n == 0) {
        res.metrics.path = "trivial";
        return res;
    }
    if (n == 1) {
        res.tiling.tiles.push_back(Embedding{1, kSingletonColour, {0}});
        res.metrics.path = "trivial";
        res.metrics.size = 1;
        return res;
    }

    SplitRng rng(params.seed);
    if (g.is_single_colour()) {
        int colour = g.colour_of(0, 1);
        auto emb = embed_member_backtracking(g, VertexSet::full(n), spec, n, colour,
                                             std::max<std::int64_t>(4'000'000, 64LL * n * n));
        if (emb) {
            res.tiling.tiles.push_back(*emb);
            res.metrics.path = "single-colour";
            res.metrics.size = 1;
            res.metrics.stages.push_back("single-colour: one spanning member");
            return res;
        }
        res.metrics.stages.push_back("single-colour spanning embed failed");
    }

    AbsorberLadder lad = iterated_absorbers(g, spec, params, rng.sub("ladder").seed());
    res.metrics.ladder_levels = lad.ell;
    res.metrics.ladder_truncated = lad.truncated;
    {
        std::ostringstream s;
        s << "ladder: ell=" << lad.ell << " |T_final|=" << lad.t_final.count();
        if (lad.truncated) s << " truncated (" << lad.truncation_reason << ")";
        res.metrics.stages.push_back(s.str());
    }

    VertexSet all_d(n);
    for (const auto& lv : lad.levels) all_d |= lv.absorber.d;

    Tiling pipe;
    pipe.n = n;
    pipe.spec = spec;
    pipe.cover_only = false;
    for (std::size_t i = 0; i < lad.levels.size(); ++i) {
        const VertexSet& ti = lad.levels[i].t;
        const VertexSet& tnext =
            i + 1 < lad.levels.size() ? lad.levels[i + 1].t : lad.t_final;
        VertexSet zi = ti;
        zi -= tnext;
        zi -= all_d;
        Tiling part = absorb_with(g, spec, lad.levels[i].absorber, zi,
                                  rng.sub("absorb", i).seed());
        std::ostringstream s;
        s << "level " << (i + 1) << ": |Z|=" << zi.count() << " tiles=" << part.tiles.size()
          << (lad.levels[i].absorber.escaped ? " (escaped)" : "");
        res.metrics.stages.push_back(s.str());
        for (auto& tl : part.tiles) pipe.tiles.push_back(std::move(tl));
    }
    VertexSet tail = lad.t_final;
    tail -= all_d;
    if (!lad.truncated) {
        tail.for_each([&](int v) { pipe.tiles.push_back(Embedding{1, kSingletonColour, {v}}); });
        if (tail.count() > 0) {
            res.metrics.stages.push_back("final: " + std::to_string(tail.count())
                                         + " singleton(s)");
        }
    } else {
        auto tiles = cover_exact(g, spec, tail, rng.sub("tail").seed());
        res.metrics.stages.push_back("final: greedy cover of truncated tail ("
                                     + std::to_string(tiles.size()) + " tiles)");
        for (auto& tl : tiles) pipe.tiles.push_back(std::move(tl));
    }

    VerifyReport vr = verify_tiling(g, spec, pipe);
    bool ok = vr.pass
        && static_cast<double>(pipe.tiles.size()) <= res.metrics.greedy_bound + kTol;
    if (ok) {
        res.tiling = std::move(pipe);
        res.metrics.path = "pipeline";
    } else {
        res.metrics.stages.push_back(vr.pass ? "pipeline size above the greedy bound"
                                             : "pipeline verification failed");
        Tiling gr;
        gr.n = n;
        gr.spec = spec;
        gr.cover_only = false;
        gr.tiles = cover_exact(g, spec, VertexSet::full(n), rng.sub("greedy").seed());
        res.tiling = std::move(gr);
        res.metrics.path = "greedy";
    }
    res.metrics.size = res.tiling.tiles.size();
    return res;
}

} // namespace monotile
